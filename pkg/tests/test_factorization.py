import pytest

from twistbook import curves as cv
from twistbook import invariants as inv
from twistbook import mcg
from twistbook.curves import CombArc
from twistbook.factorization import (Factorization, IndexOutOfRange, MoveScript, OpenBook,
                                     StepFailed, cyclic_permute, global_conjugate,
                                     hurwitz_move, hurwitz_search, run_script, stabilize,
                                     total_monodromy)
from twistbook.mcg import D
from twistbook.paperlib import build
from twistbook.surface import build_surface, polygon_spec


@pytest.fixture(scope="module")
def f1():
    return build("thm-ope", 1)


def test_empty_factorization(f1):
    f = Factorization(f1.page)
    assert len(total_monodromy(f)) == 0
    assert run_script(f, MoveScript(), f).ok


def test_total_monodromy_order(f1):
    # the first cycle acts first, so the word D(V0) D(V1^1) D(V1^2) D(V2) is stored reversed
    f = f1.factorization("phi")
    names = [f1.names()[c] for c in f.cycles]
    assert names == ["V2", "V1^2", "V1^1", "V0"]
    w = f.total_monodromy()
    assert [f1.names()[a.curve] for a in w.atoms] == ["V0", "V1^1", "V1^2", "V2"]


def test_hurwitz_forward_inverse_round_trip(f1):
    f = f1.factorization("phi")
    for i in range(1, len(f)):
        g = hurwitz_move(hurwitz_move(f, i, "forward"), i, "inverse")
        assert g.isotopic_to(f)


def test_hurwitz_preserves_monodromy(f1):
    f = f1.factorization("phi")
    for i in range(1, len(f)):
        for d in ("forward", "inverse"):
            assert mcg.equal(f.total_monodromy(), hurwitz_move(f, i, d).total_monodromy())


def test_hurwitz_bad_index(f1):
    f = f1.factorization("phi")
    for i in (0, len(f)):
        with pytest.raises(IndexOutOfRange):
            hurwitz_move(f, i)
    with pytest.raises(ValueError):
        hurwitz_move(f, 1, "sideways")


def test_hurwitz_on_last_two_twists():
    # moving the last two twists of phi~ gives D(A13 D(b) A13^-1 A13 A24 b) D(A13 b)
    fam = build("vhm-4holed")
    c = fam.curves
    f = fam.factorization("phi_tilde")
    g = hurwitz_move(f, 1)
    A13 = D(c["a1"]) * D(c["a3"])
    A24 = D(c["a2"]) * D(c["a4"])
    assert cv.is_isotopic(g[0], c["A13(b)"])
    assert cv.is_isotopic(g[1], mcg.apply(A13 * D(c["b"]) * A13.inverse() * A13 * A24, c["b"]))


def test_cyclic_full_turn_is_identity(f1):
    f = f1.factorization("phi")
    assert cyclic_permute(f, len(f)).isotopic_to(f)
    assert cyclic_permute(f, 0).isotopic_to(f)
    assert not cyclic_permute(f, 1).isotopic_to(f)


def test_cyclic_permutation_is_conjugate(f1):
    f = f1.factorization("phi")
    g = cyclic_permute(f, 1)
    # rotation conjugates the monodromy by the moved twist
    x = D(f[0])
    assert mcg.equal(g.total_monodromy(), x * f.total_monodromy() * x.inverse())


def test_global_conjugation(f1):
    f = f1.factorization("phi")
    w = D(f1.curve("V0"))
    g = global_conjugate(f, w)
    assert mcg.equal(g.total_monodromy(), w * f.total_monodromy() * w.inverse())


def test_script_failure_report(f1):
    f = f1.factorization("phi")
    script = MoveScript().add("replace_isotopic", "wrong", i=1, curve=f1.curve("V0"))
    rep = run_script(f, script, f)
    assert rep.status == "refuted" and rep.failed_step == 0
    with pytest.raises(StepFailed):
        run_script(f, script, f, raise_on_failure=True)
    rep = run_script(f, MoveScript().add("hurwitz", i=1), f)
    assert rep.status == "refuted" and rep.failed_step == 1


def test_unknown_step_kind():
    with pytest.raises(ValueError):
        MoveScript().add("shuffle")


def test_hurwitz_search_finds_one_move():
    fam = build("vhm-4holed")
    s = hurwitz_search(fam.factorization("phi_tilde"), hurwitz_move(fam.factorization("phi_tilde"), 2), 1)
    assert s is not None and len(s) == 1


def test_rewrite_conjugation_step():
    fam = build("vhm-4holed")
    c = fam.curves
    A13 = D(c["a1"]) * D(c["a3"])
    f = fam.factorization("phi_tilde")
    script = MoveScript().add("rewrite_conjugation", "D(A13 b) = A13 D(b) A13^-1", i=2,
                              word=A13, curve=c["b"])
    assert run_script(f, script, f).ok


def test_script_json_names(f1):
    s = MoveScript().add("hurwitz", "x", i=1).add("replace_isotopic", i=2, curve=f1.curve("V0"))
    data = s.to_json(f1.names())
    assert data["steps"][1]["params"]["curve"] == "V0"


def square_page():
    return build_surface(polygon_spec([("Q", ["a", "b", "c", "d"])]))


def test_stabilize_disk_gives_annulus():
    page = square_page()
    arc = CombArc.from_corners(page, (0, 0), (), (0, 1))
    ob, st = stabilize(OpenBook(page, Factorization(page)), arc)
    sc = ob.page.classify()
    assert (sc.genus, sc.n_boundary) == (0, 2)
    assert len(ob.factorization) == 1
    assert cv.is_boundary_parallel(st.core) is not None
    # the open book of S^3
    assert inv.h1_open_book(ob.page, ob.factorization) == inv.AbelianGroup(0)


def test_stabilization_keeps_h1(f1):
    ob = f1.open_book("phi")
    before = inv.h1_open_book(ob.page, ob.factorization)
    for arc in mcg.filling_arcs(ob.page)[:6]:
        if arc.start == arc.end:
            continue
        new, _ = stabilize(ob, arc)
        assert inv.h1_open_book(new.page, new.factorization) == before
        sc = new.page.classify()
        assert sc.euler == ob.page.classify().euler - 1


def test_psi_hat_keeps_psi_homology():
    # psi^_g is psi_g on Sigma_{g,g+2} stabilized 3g times
    for g in (1, 2):
        base = build("thm-g+2", g)
        fam = build("stabilized-g", g)
        sc = fam.page.classify()
        assert (sc.genus, sc.n_boundary) == (g, 4 * g + 2)
        assert len(fam.factorization("psi_hat")) == len(base.factorization("psi")) + 3 * g
        assert (inv.h1_open_book(fam.page, fam.factorization("psi_hat"))
                == inv.h1_open_book(base.page, base.factorization("psi")))


@pytest.mark.parametrize("g", [1, 2])
def test_phi_hat_keeps_phi_homology(g):
    # phi^_g adds 2g cycles and keeps the 3-manifold's homology
    fam = build("stabilized-g", g)
    base = build("thm-ope", g)
    assert len(fam.factorization("phi_hat")) == len(base.factorization("phi")) + 2 * g
    assert (inv.h1_open_book(fam.page, fam.factorization("phi_hat"))
            == inv.h1_open_book(base.page, base.factorization("phi")))
    c = fam.curves
    for j in range(1, g + 1):
        eta = mcg.apply(D(c["V2"], -1) * D(c[f"beta_{j}"], -1), c[f"alpha_4,{j}"])
        assert cv.is_isotopic(c[f"eta_{j}"], eta)


def test_factorization_rejects_trivial_cycle(f1):
    with pytest.raises(ValueError):
        Factorization(f1.page, [cv.CombCurve(f1.page, ())])
