import pytest

from twistbook import curves as cv
from twistbook import mcg
from twistbook.curves import PageMismatch
from twistbook.mcg import D, TrivialTwistCurve, TwistAtom
from twistbook.paperlib import build
from twistbook.paperlib.families import holed_torus


@pytest.fixture(scope="module")
def torus1():
    m, curves = holed_torus(1)
    return m.page, curves


def test_empty_and_cancelling_words(torus1):
    page, c = torus1
    e = mcg.identity(page)
    assert mcg.is_identity(e)
    assert mcg.equal(D(c["a1"]) * D(c["a1"]).inverse(), e)
    assert mcg.is_identity(D(c["b"]) * mcg.Dinv(c["b"]))
    assert not mcg.is_identity(D(c["b"]))


def test_braid_relation(torus1):
    _, c = torus1
    a, b = D(c["a1"]), D(c["b"])
    assert mcg.equal(a * b * a, b * a * b)
    assert not mcg.equal(a * b, b * a)


def test_two_chain_relation(torus1):
    # (D(a) D(b))^6 is the boundary twist on the one-holed torus
    _, c = torus1
    assert mcg.equal((D(c["a1"]) * D(c["b"])) ** 6, D(c["delta1"]))
    assert not mcg.equal((D(c["a1"]) * D(c["b"])) ** 6, D(c["delta1"]).inverse())


def test_boundary_twist_is_central(torus1):
    _, c = torus1
    d = D(c["delta1"])
    for x in (c["a1"], c["b"]):
        assert mcg.equal(d * D(x), D(x) * d)


def test_boundary_twist_acts_trivially_on_homology(torus1):
    page, c = torus1
    m = mcg.induced_h1_matrix(D(c["delta1"]))
    n = len(m)
    assert m == [[int(i == j) for j in range(n)] for i in range(n)]


def test_apply_fixes_core(torus1):
    _, c = torus1
    assert cv.is_isotopic(mcg.apply(D(c["a1"]), c["a1"]), c["a1"])


def test_homology_matrix_matches_curve_images():
    fam = build("thm-ope", 1)
    c = fam.curves
    w = D(c["V0"]) * D(c["V2"], -1) * D(c["V1^1"])
    m = mcg.induced_h1_matrix(w)
    for j, loop in enumerate(mcg.basis_loops(fam.page)):
        img = cv.homology_class(mcg.apply(w, loop))
        col = tuple(row[j] for row in m)
        assert img == col or img == tuple(-x for x in col)


def test_identity_matrix_for_empty_word():
    page = build("thm-ope", 1).page
    m = mcg.induced_h1_matrix(mcg.identity(page))
    assert all(m[i][j] == int(i == j) for i in range(len(m)) for j in range(len(m)))


def test_lantern_on_four_holed_sphere():
    fam = build("thm-ope2", 1)
    page, c = fam.page, fam.curves
    lhs = D(c["V0"]) * D(c["V1^1"]) * D(c["V2"])
    rhs = mcg.product(page, [D(cv.boundary_curve(page, i)) for i in range(4)])
    assert mcg.equal(lhs, rhs)
    assert mcg.is_identity(lhs * rhs.inverse())
    # the reversed order is a different mapping class
    assert not mcg.equal(D(c["V2"]) * D(c["V1^1"]) * D(c["V0"]), rhs)


def test_wrong_handedness_caught_by_arcs():
    # a wrong handedness is caught by the arcs even with the homology filter off
    fam = build("thm-ope2", 1)
    page, c = fam.page, fam.curves
    lhs = D(c["V0"], -1) * D(c["V1^1"]) * D(c["V2"])
    rhs = mcg.product(page, [D(cv.boundary_curve(page, i)) for i in range(4)])
    assert not mcg.equal(lhs, rhs, use_homology=False)
    assert mcg.first_difference(lhs, rhs) is not None


def test_star_relation():
    fam = build("vhm-3holed")
    c = fam.curves
    lhs = D(c["delta1"]) * D(c["delta2"]) * D(c["delta3"])
    rhs = (D(c["b"]) * D(c["a1"]) * D(c["a2"]) * D(c["a3"])) ** 3
    assert mcg.equal(lhs, rhs)


def test_conjugation_identities():
    fam = build("vhm-4holed")
    c = fam.curves
    A13 = D(c["a1"]) * D(c["a3"])
    assert mcg.equal(A13 * D(c["b"]) * A13.inverse(), D(mcg.apply(A13, c["b"])))
    fam3 = build("vhm-3holed")
    c3 = fam3.curves
    T = D(c3["a1"]) * D(c3["a2"]) * D(c3["a3"])
    assert mcg.equal(T.inverse() * D(c3["b"]) * T, D(mcg.conjugate_curve(T.inverse(), c3["b"])))
    assert cv.is_isotopic(mcg.conjugate_curve(mcg.identity(fam3.page), c3["b"]), c3["b"])


def test_rewrite_conjugation():
    fam = build("vhm-4holed")
    c = fam.curves
    u = D(c["a1"]) * D(c["a3"])
    w = D(c["a2"]) * u * D(c["b"]) * u.inverse()
    r = mcg.rewrite_conjugation(w, 1, 5)
    assert len(r) == 2
    assert mcg.equal(r, w)
    with pytest.raises(ValueError):
        mcg.rewrite_conjugation(w, 0, 4)


def test_disjoint_twists_commute():
    c = build("thm-ope", 2).curves
    assert mcg.equal(D(c["V1^1"]) * D(c["V1^3"]), D(c["V1^3"]) * D(c["V1^1"]))


def test_trivial_curve_rejected():
    page = build("thm-ope", 1).page
    with pytest.raises(TrivialTwistCurve):
        TwistAtom(cv.CombCurve(page, ()))
    with pytest.raises(ValueError):
        TwistAtom(build("thm-ope", 1).curve("V0"), 2)


def test_words_on_different_pages():
    a = D(build("thm-ope", 1).curve("V0"))
    b = D(build("thm-ope", 2).curve("V0"))
    with pytest.raises(PageMismatch):
        a * b
    with pytest.raises(PageMismatch):
        mcg.equal(a, b)


def test_word_json_round_trip():
    fam = build("thm-ope", 1)
    w = fam.factorization("phi").total_monodromy() * D(fam.curve("V0"), -1)
    data = w.to_json()
    assert mcg.word_from_json(fam.page, data) == w
    named = w.to_json(fam.names())
    assert mcg.word_from_json(fam.page, named, fam.curves) == w
