import random

import pytest

from twistbook import curves as cv
from twistbook import mcg
from twistbook.curves import CombArc, CombCurve, CurveError, NotEmbedded, PageMismatch
from twistbook.mcg import D
from twistbook.paperlib import build


@pytest.fixture(scope="module")
def f1():
    return build("thm-ope", 1)


def with_backtracks(page, path, rng, n=4):
    """Insert n spurs h, twin(h) at random places: same curve, extra bigons."""
    p = list(path)
    for _ in range(n):
        i = rng.randrange(1, len(p) + 1)
        tri = page.twin[p[i - 1]] // 3
        h = 3 * tri + rng.randrange(3)
        if page.twin[h] < 0:
            continue
        p[i:i] = [h, page.twin[h]]
    return p


def test_bigon_removal(f1):
    c = f1.curve("V0")
    page = f1.page
    rng = random.Random(0)
    raw = CombCurve(page, tuple(with_backtracks(page, c.path, rng, 1)))
    assert len(cv.normalize(raw)) == len(c)
    assert cv.is_isotopic(raw, c)


def test_taut_v2_matches_reduction_minimum(f1):
    # every spur-laden copy of V2 reduces to the same edge vector, and no copy is shorter
    page, v2 = f1.page, f1.curve("V2")
    rng = random.Random(7)
    target = cv.edge_vector(v2)
    for _ in range(50):
        raw = CombCurve(page, tuple(with_backtracks(page, v2.path, rng)))
        assert cv.edge_vector(raw) == target
        assert sum(target) <= len(raw)


def test_isotopy_reflexive_and_direction_free(f1):
    c = f1.curve("V2")
    assert cv.is_isotopic(c, c)
    assert cv.is_isotopic(c, c.reversed())
    assert not cv.is_isotopic(c, f1.curve("V0"))


def test_intersections_on_f1(f1):
    gi = cv.geometric_intersection
    c = f1.curves
    # DERIVED: V1^j crosses the bottom segment once at p_j and once at q_j
    assert gi(c["V0"], c["V1^1"]) == 2
    assert gi(c["V0"], c["V1^2"]) == 2
    # DERIVED: distinct vertical segments in the strip model
    assert gi(c["V1^1"], c["V1^2"]) == 0
    assert gi(c["V2"], c["V0"]) == 4


@pytest.mark.parametrize("g", [2, 3])
def test_intersection_table_thm_ope(g):
    fam = build("thm-ope", g)
    gi = cv.geometric_intersection
    v1 = [fam.curve(f"V1^{j}") for j in range(1, 2 * g + 1)]
    for j, x in enumerate(v1):
        assert gi(fam.curve("V0"), x) == 2
        assert gi(fam.curve("V2"), x) == 2
        for y in v1[j + 1:]:
            assert gi(x, y) == 0
    assert gi(fam.curve("V0"), fam.curve("V2")) == 4 * g


def test_parallel_copy_disjoint(f1):
    c = f1.curve("V0")
    assert cv.geometric_intersection(c, c) == 0


def test_algebraic_bounds_geometric(f1):
    names = list(f1.curves)
    for a in names:
        for b in names:
            x, y = f1.curve(a), f1.curve(b)
            alg = abs(cv.algebraic_intersection(x, y))
            geo = cv.geometric_intersection(x, y)
            assert alg <= geo and (geo - alg) % 2 == 0


def test_torus_a_b_meet_once():
    fam = build("vhm-3holed")
    assert cv.geometric_intersection(fam.curve("a1"), fam.curve("b")) == 1
    assert abs(cv.algebraic_intersection(fam.curve("a1"), fam.curve("b"))) == 1


def test_boundary_parallel():
    fam = build("thm-ope2", 1)
    page = fam.page
    for i in range(4):
        assert cv.is_boundary_parallel(cv.boundary_curve(page, i)) == i
    for n in ("V0", "V1^1", "V2"):
        assert cv.is_boundary_parallel(fam.curve(n)) is None


@pytest.mark.parametrize("g", [1, 2, 3])
def test_v0_not_boundary_parallel(g):
    assert cv.is_boundary_parallel(build("thm-ope", g).curve("V0")) is None


def test_boundary_classes_sum_to_zero():
    fam = build("thm-ope2", 1)
    page = fam.page
    b0 = cv.boundary_curve(page, 0)
    assert any(cv.homology_class(b0))
    # a boundary component of a planar page is the sum of the others (up to sign)
    total = [0] * len(cv.h1_basis(page))
    for i in range(4):
        for k, x in enumerate(cv.homology_class(cv.boundary_curve(page, i))):
            total[k] += x
    assert not any(total)
    empty = CombCurve(page, ())
    assert empty.is_trivial and not any(cv.homology_class(empty))


def test_homology_direction_flag(f1):
    c = f1.curve("V2")
    fwd, back = cv.homology_class(c, 1), cv.homology_class(c, -1)
    assert tuple(-x for x in fwd) == back


def test_embedded_curves_pass(f1):
    for c in f1.curves.values():
        cv.check_embedded(c)


def test_square_of_curve_not_embedded(f1):
    c = f1.curve("V0")
    with pytest.raises(NotEmbedded):
        cv.check_embedded(CombCurve(f1.page, c.path * 2))


def test_page_mismatch(f1):
    other = build("thm-ope", 2)
    with pytest.raises(PageMismatch):
        cv.is_isotopic(f1.curve("V0"), other.curve("V0"))


def test_bad_path_rejected(f1):
    with pytest.raises(CurveError):
        CombCurve(f1.page, (0, 0, 0))


def test_curve_json_round_trip(f1):
    for c in f1.curves.values():
        back = cv.curve_from_json(f1.page, c.to_json())
        assert cv.is_isotopic(back, c)
        data = c.to_json()
        data.pop("path")
        assert cv.is_isotopic(cv.curve_from_json(f1.page, data), c)


def test_arc_json_round_trip():
    fam = build("vhm-3holed")
    s = fam.curve("s")
    assert isinstance(s, CombArc)
    back = cv.curve_from_json(fam.page, s.to_json())
    assert cv.is_isotopic(back, s)
    data = s.to_json()
    data.pop("path")
    assert cv.is_isotopic(cv.curve_from_json(fam.page, data), s)


def test_isotopy_after_twists_vhm():
    # A13 D(b) A13^-1 A13 A24 (b) is isotopic to A24^-1 A13 (b)
    fam = build("vhm-4holed")
    c = fam.curves
    A13 = D(c["a1"]) * D(c["a3"])
    A24 = D(c["a2"]) * D(c["a4"])
    lhs = mcg.apply(A13 * D(c["b"]) * A13.inverse() * A13 * A24, c["b"])
    rhs = mcg.apply(A24.inverse() * A13, c["b"])
    assert cv.is_isotopic(lhs, rhs)


def test_isotopy_on_stabilized_page():
    fam = build("stabilized-g", 1)
    c = fam.curves
    lhs = cv.twist(c["V1^1"], c["alpha_3,1"], -1)
    rhs = cv.twist(c["alpha_4,1"], c["beta_1"], 1)
    assert cv.is_isotopic(lhs, rhs)


def test_twist_fixes_core_and_disjoint(f1):
    c = f1.curves
    assert cv.is_isotopic(cv.twist(c["V0"], c["V0"]), c["V0"])
    assert cv.is_isotopic(cv.twist(c["V1^1"], c["V1^2"]), c["V1^2"])
    assert not cv.is_isotopic(cv.twist(c["V0"], c["V1^1"]), c["V1^1"])


def test_twist_intersection_growth(f1):
    # i(D_a(b), b) = i(a, b)^2
    c = f1.curves
    img = cv.twist(c["V0"], c["V1^1"])
    assert cv.geometric_intersection(img, c["V1^1"]) == 4
