import copy
import json

import pytest

from twistbook import curves as cv
from twistbook import mcg
from twistbook.paperlib import (FAMILIES, PROOF_NAMES, NamedFamily, RelationCheck, ScriptCheck,
                                UnknownFamily, UnsupportedParameter, ValidationFailed, build,
                                identity_block, lift, proof_script)
from twistbook.paperlib import families
from twistbook.paperlib.families import BlockSurface, _base_blocks, _base_curves
from twistbook.paperlib.models import PolygonModel, RouteError


def page_of(fam):
    sc = fam.page.classify()
    return sc.genus, sc.n_boundary


def test_build_thm_ope_1():
    fam = build("thm-ope", 1)
    assert page_of(fam) == (1, 4)
    assert len(fam.factorization("phi")) == 4
    for j in (1, 2):
        assert cv.geometric_intersection(fam.curve("V0"), fam.curve(f"V1^{j}")) == 2


def test_build_thm_gplus2_2():
    fam = build("thm-g+2", 2)
    assert page_of(fam) == (2, 4)
    names = [fam.names()[c] for c in fam.factorization("psi")]
    assert names == ["U2", "U1^2", "U1^1", "U0"]


def test_build_thm_ope2_1():
    fam = build("thm-ope2", 1)
    assert page_of(fam) == (0, 4)
    assert len(fam.factorization("phi")) == 3


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_page_classification_range(g):
    assert page_of(build("thm-ope", g)) == (g, 2 * g + 2)
    assert page_of(build("stabilized-g", g)) == (g, 4 * g + 2)


@pytest.mark.parametrize("name,p", [(n, 1) for n in FAMILIES]
                         + [("thm-ope", 2), ("thm-g+2", 3), ("thm-ope2", 3), ("stabilized-g", 2)])
def test_json_round_trip_is_bit_identical(name, p):
    fam = build(name, p)
    text = json.dumps(fam.to_json(), sort_keys=True)
    back = NamedFamily.from_json(json.loads(text))
    assert json.dumps(back.to_json(), sort_keys=True) == text
    assert back.page == fam.page
    for k in fam.factorizations:
        assert back.factorization(k).isotopic_to(fam.factorization(k))


@pytest.mark.parametrize("name,p", [("thm-ope", 0), ("thm-ope", -2), ("thm-ope2", 0),
                                    ("vhm-4holed", 2), ("vhm-3holed", 3), ("thm-ope", "2")])
def test_unsupported_parameters(name, p):
    with pytest.raises(UnsupportedParameter):
        build(name, p)


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        build("thm-nope", 1)


def test_corrupted_transcription_fails_loudly(monkeypatch):
    real = families.load_data

    def corrupt(name):
        data = copy.deepcopy(real(name))
        if name == "strip_orientable":
            # a V1 curve that uses only one of its two slits
            data["curves"]["V1^{j}"]["per_index"] = ["+p{j}", "+p{j}"]
        return data

    monkeypatch.setattr(families, "load_data", corrupt)
    with pytest.raises((ValidationFailed, RouteError, ValueError)):
        families.build_thm_ope(1)


def test_wrong_smoothing_fails_validation(monkeypatch):
    real = families.load_data

    def other_smoothing(name):
        data = copy.deepcopy(real(name))
        if name == "strip_orientable":
            data["curves"]["V2"]["per_block"] = ["+p{o}", "+q{o}", "+q{e}", "+p{e}"]
        return data

    monkeypatch.setattr(families, "load_data", other_smoothing)
    with pytest.raises((ValidationFailed, RouteError, ValueError)):
        families.build_thm_ope(1)


def test_data_files_carry_provenance():
    for name in ("strip_orientable", "strip_planar", "holed_torus", "torus_blocks"):
        data = families.load_data(name)
        assert data["provenance"] and all(isinstance(x, str) for x in data["provenance"])


def test_route_errors():
    m = PolygonModel([("Q", ["b", "R", "t", "L"])], [(("Q", "R"), ("Q", "L"))])
    with pytest.raises(RouteError):
        m.curve([("Q", "b")])
    with pytest.raises((RouteError, KeyError)):
        m.curve([("Q", "missing")])


def test_lift_of_curves_missing_s():
    bs = BlockSurface(3)
    base = _base_curves()
    lifts = [lift(bs, base["b"], j) for j in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            assert cv.geometric_intersection(lifts[i], lifts[j]) == 0
            assert not cv.is_isotopic(lifts[i], lifts[j])


def test_lift_of_curve_crossing_s_visits_every_block():
    bs = BlockSurface(3)
    gamma = lift(bs, _base_curves()["a1"])
    for j in range(3):
        assert cv.geometric_intersection(gamma, lift(bs, _base_curves()["b"], j)) == 1


def test_lift_to_one_block_is_identity():
    base = _base_curves()
    assert cv.is_isotopic(lift(_base_blocks(), base["T(b)"]), base["T(b)"])


def test_arc_s_on_three_holed_torus():
    fam = build("vhm-3holed")
    s = fam.curve("s")
    assert cv.geometric_intersection(fam.curve("a1"), s) == 1
    vc = fam.page.vertex_component()
    assert vc[s.start] != vc[s.end]


@pytest.mark.parametrize("g", [1, 2, 3])
def test_identity_block(g):
    rows = identity_block(g)
    assert len(rows) == 6 + 4 * g
    for label, lhs, rhs in rows:
        assert cv.is_isotopic(lhs, rhs), label


def test_identity_block_rejects_bad_parameter():
    with pytest.raises(UnsupportedParameter):
        identity_block(0)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_stabilizing_arcs(g):
    fam = build("stabilized-g", g)
    c = fam.curves
    for j in range(1, g + 1):
        assert cv.geometric_intersection(c[f"alpha_3,{j}"], c[f"beta_{j}"]) == 1
        for k in (1, 3, 4):
            assert cv.is_boundary_parallel(c[f"alpha_{k},{j}"]) is None
    cores = [c[f"alpha_{k},{j}"] for k in (1, 3, 4) for j in range(1, g + 1)]
    for i, x in enumerate(cores):
        for y in cores[i + 1:]:
            assert cv.geometric_intersection(x, y) == 0


def test_vhm_four_twists_is_literally_phi_tilde():
    fam = build("vhm-4holed")
    c = fam.curves
    assert mcg.equal(fam.factorization("phi_tilde").total_monodromy(),
                     proof_script("vhm-four-twists").lhs)
    assert cv.geometric_intersection(c["V1^1"], c["V1^2"]) == 0


@pytest.mark.parametrize("name", [n for n in PROOF_NAMES])
def test_every_derivation_checks(name):
    chk = proof_script(name)
    if isinstance(chk, RelationCheck):
        assert chk.verify() is chk.expected
    else:
        assert isinstance(chk, ScriptCheck)
        assert chk.verify().ok


@pytest.mark.parametrize("g", [2, 3])
def test_chain_for_higher_genus(g):
    chk = proof_script("gplus2-chain", g)
    rep = chk.verify()
    assert rep.ok, (rep.failed_step, rep.reason)
    kinds = {s.kind for s in chk.script.steps}
    assert kinds == {"hurwitz", "hurwitz_inverse", "cyclic", "replace_isotopic"}


def test_chain_script_serializes_with_names():
    chk = proof_script("gplus2-chain", 1)
    data = chk.script.to_json(chk.family.names())
    assert len(data["steps"]) == len(chk.script)
    assert any(isinstance(s["params"].get("curve"), str) for s in data["steps"])


def test_unknown_derivation():
    with pytest.raises(KeyError):
        proof_script("no-such-derivation")
    with pytest.raises(UnsupportedParameter):
        proof_script("gplus2-chain", 0)
