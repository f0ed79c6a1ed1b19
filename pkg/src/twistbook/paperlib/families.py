"""
Builders for the open books and Lefschetz fibrations of the construction.

Every family is assembled from a data file in ``data/`` and validated before
it is returned.  Factorization tuples follow the package convention: the
tuple (d1, ..., dk) has monodromy D(dk) ... D(d1), so a displayed product
D(X1) D(X2) ... D(Xm) is stored as (Xm, ..., X1).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any

from .. import curves as cv
from .. import mcg
from ..curves import CombArc, CombCurve, normalize
from ..factorization import Factorization, OpenBook, attach_handle
from ..mcg import D
from ..surface import Triangulation
from .models import PolygonModel, strip_polygon

DATA_DIR = Path(__file__).with_name("data")

FAMILIES = ("thm-ope", "thm-g+2", "vhm-4holed", "vhm-3holed", "thm-ope2", "stabilized-g")


class ValidationFailed(RuntimeError):
    """A built family violates a fact it must satisfy (a transcription bug)."""


class UnknownFamily(KeyError):
    pass


class UnsupportedParameter(ValueError):
    pass


def load_data(model: str) -> dict:
    return json.loads((DATA_DIR / f"{model}.json").read_text())


# ----------------------------------------------------------------------------
# The family container
# ----------------------------------------------------------------------------

@dataclass
class NamedFamily:
    name: str
    parameter: int
    page: Triangulation
    curves: dict[str, Any] = field(default_factory=dict)
    factorizations: dict[str, tuple[str, ...]] = field(default_factory=dict)
    model: PolygonModel | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        # canonical representatives make serialization a fixed point
        self.curves = {n: cv.normalize(c) for n, c in self.curves.items()}

    def curve(self, name: str):
        return self.curves[name]

    def factorization(self, key: str) -> Factorization:
        return Factorization(self.page, [self.curves[n] for n in self.factorizations[key]])

    def open_book(self, key: str) -> OpenBook:
        return OpenBook(self.page, self.factorization(key))

    @property
    def default_factorization(self) -> str:
        return next(iter(self.factorizations))

    def names(self) -> dict:
        """curve -> name, for readable JSON of words and scripts; an alias
        never shadows the name a curve was introduced under."""
        out: dict = {}
        for n, c in self.curves.items():
            out.setdefault(c, n)
        return out

    def to_json(self) -> dict:
        return {
            "family": self.name,
            "parameter": self.parameter,
            "page": self.page.to_json(),
            "page_hash": self.page.hash,
            "curves": {n: c.to_json() for n, c in self.curves.items()},
            "factorizations": {k: list(v) for k, v in self.factorizations.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "NamedFamily":
        page = Triangulation.from_json(data["page"])
        curves = {n: cv.curve_from_json(page, c) for n, c in data["curves"].items()}
        facts = {k: tuple(v) for k, v in data["factorizations"].items()}
        return cls(data["family"], int(data["parameter"]), page, curves, facts)


def _fill(template: str, **kw) -> str:
    return template.format(**kw)


def _check(cond: bool, message: str):
    if not cond:
        raise ValidationFailed(message)


# ----------------------------------------------------------------------------
# Strip models: the orientable and planar rectangles
# ----------------------------------------------------------------------------

def strip_model(data: dict, blocks: int) -> tuple[PolygonModel, dict[str, CombCurve], list[str]]:
    """Assemble a strip page and its curves; returns (model, curves, order).

    ``order`` lists the curve names in the displayed monodromy product.
    """
    width = data["block_width"]
    marks = []
    for i in range(1, blocks + 1):
        for name, off in data["marks"]:
            marks.append((_fill(name, o=2 * i - 1, e=2 * i), (i - 1) * width + Fraction(off)))
    P = "strip"
    glue = [((P, a), (P, b)) for a, b in data["glue_fixed"]]
    n_idx = data.get("indices_per_block", 0) * blocks
    for j in range(1, n_idx + 1):
        glue += [((P, _fill(a, j=j)), (P, _fill(b, j=j))) for a, b in data["glue_per_index"]]
    for i in range(1, blocks + 1):
        for a, b in data.get("glue_per_block", []):
            glue.append(((P, _fill(a, o=2 * i - 1, e=2 * i)), (P, _fill(b, o=2 * i - 1, e=2 * i))))
    m = PolygonModel([(P, strip_polygon(width * blocks, marks))], glue)

    curves: dict[str, CombCurve] = {}
    v1 = []
    for name, spec in data["curves"].items():
        if "fixed" in spec:
            curves[name] = m.curve([(P, s) for s in spec["fixed"]])
        elif "per_index" in spec:
            for j in range(1, n_idx + 1):
                nm = _fill(name, j=j)
                curves[nm] = m.curve([(P, _fill(s, j=j)) for s in spec["per_index"]])
                v1.append(nm)
        elif "per_block_curve" in spec:
            for i in range(1, blocks + 1):
                nm = _fill(name, i=i)
                curves[nm] = m.curve([(P, _fill(s, o=2 * i - 1, e=2 * i)) for s in spec["per_block_curve"]])
                v1.append(nm)
        else:
            route = []
            for i in range(1, blocks + 1):
                route += [(P, _fill(s, o=2 * i - 1, e=2 * i)) for s in spec["per_block"]]
            route += [(P, s) for s in spec["tail"]]
            curves[name] = m.curve(route)
    order = []
    for nm in data["monodromy"]:
        order += v1 if nm == "V1^*" else [nm]
    return m, curves, order


def _sign_combination(target, basis) -> tuple[int, ...] | None:
    """Signs e with target = sum e_i basis_i, if any."""
    for signs in itertools.product((1, -1), repeat=len(basis)):
        if all(sum(s * b[k] for s, b in zip(signs, basis)) == target[k] for k in range(len(target))):
            return signs
    return None


def _validate_strip(fam: NamedFamily, genus: int, n_boundary: int, v1: list[str], v2_v0: int,
                    oriented: bool):
    sc = fam.page.classify()
    _check((sc.genus, sc.n_boundary) == (genus, n_boundary),
           f"{fam.name}: page is {sc}, expected genus {genus} with {n_boundary} boundary components")
    c = fam.curves
    gi = cv.geometric_intersection
    for name, x in c.items():
        cv.check_embedded(x)
        _check(not x.is_trivial, f"{name} is null-homotopic")
    for j, a in enumerate(v1):
        _check(gi(c["V0"], c[a]) == 2, f"i(V0, {a}) != 2")
        _check(gi(c["V2"], c[a]) == 2, f"i(V2, {a}) != 2")
        for b in v1[j + 1:]:
            _check(gi(c[a], c[b]) == 0, f"{a} and {b} intersect")
    _check(gi(c["V2"], c["V0"]) == v2_v0, f"i(V2, V0) != {v2_v0}")
    # resolving crossings preserves the class mod 2; when the resolution
    # respects orientations it is a signed sum over Z
    basis = [cv.homology_class(c["V0"])] + [cv.homology_class(c[a]) for a in v1]
    v2 = cv.homology_class(c["V2"])
    _check(all((x - sum(b[k] for b in basis)) % 2 == 0 for k, x in enumerate(v2)),
           "[V2] != [V0] + sum [V1^j] mod 2")
    if oriented:
        _check(_sign_combination(v2, basis) is not None,
               "[V2] is not a signed sum of [V0] and the [V1^j]")


def _strip_family(name: str, data_name: str, blocks: int, genus: int, nb: int, v2_v0: int,
                  oriented: bool) -> NamedFamily:
    m, curves, order = strip_model(load_data(data_name), blocks)
    fam = NamedFamily(name, blocks, m.page, curves, {"phi": tuple(reversed(order))}, m)
    _validate_strip(fam, genus, nb, [n for n in order if n.startswith("V1^")], v2_v0, oriented)
    return fam


def build_thm_ope(g: int) -> NamedFamily:
    return _strip_family("thm-ope", "strip_orientable", g, g, 2 * g + 2, 4 * g, True)


def build_thm_ope2(k: int) -> NamedFamily:
    return _strip_family("thm-ope2", "strip_planar", k, 0, 2 * k + 2, 2 * k, False)


# ----------------------------------------------------------------------------
# Holed tori
# ----------------------------------------------------------------------------

def torus_polygon(n: int) -> list[str]:
    bottom, top = ["hb0a"], ["ht0a"]
    for i in range(n):
        bottom.append(f"sb{i}")
        top.append(f"st{i}")
        if i < n - 1:
            bottom.append(f"hb{i + 1}")
            top.append(f"ht{i + 1}")
    return bottom + ["hb0b", "R", "ht0b"] + top[::-1] + ["L"]


def holed_torus(n: int) -> tuple[PolygonModel, dict[str, CombCurve]]:
    data = load_data("holed_torus")
    P = "torus"
    glue = [((P, "R"), (P, "L"))] + [((P, f"st{i}"), (P, f"sb{i}")) for i in range(n)]
    m = PolygonModel([(P, torus_polygon(n))], glue)
    curves = {}
    for i in range(1, n + 1):
        curves[_fill("a{i}", i=i)] = m.curve([(P, _fill(s, k=i - 1)) for s in data["curves"]["a{i}"]])
    curves["b"] = m.curve([(P, s) for s in data["curves"]["b"]])
    for i in range(1, n + 1):
        side = _fill(data["deltas"]["delta{i}"], i=i) if i < n else data["deltas"]["last"]
        curves[f"delta{i}"] = cv.boundary_curve(m.page, m.boundary_component_of(P, side))
    return m, curves


def _validate_torus(fam: NamedFamily, n: int):
    sc = fam.page.classify()
    _check((sc.genus, sc.n_boundary) == (1, n), f"{fam.name}: page is {sc}")
    c = fam.curves
    gi = cv.geometric_intersection
    a = [c[f"a{i}"] for i in range(1, n + 1)]
    for i, x in enumerate(a):
        _check(gi(x, c["b"]) == 1, f"i(a{i + 1}, b) != 1")
        for y in a[i + 1:]:
            _check(gi(x, y) == 0, "a-curves intersect")
            _check(not cv.is_isotopic(x, y), "two a-curves are isotopic")
    for i in range(1, n + 1):
        _check(cv.is_boundary_parallel(c[f"delta{i}"]) is not None, f"delta{i} is not boundary-parallel")


def build_vhm_4holed(_: int = 1) -> NamedFamily:
    m, curves = holed_torus(4)
    pg = m.page
    a = [curves[f"a{i}"] for i in range(1, 5)]
    b = curves["b"]
    A13 = D(a[0]) * D(a[2])
    A24 = D(a[1]) * D(a[3])
    ap = mcg.apply
    curves["A24^-1(b)"] = ap(A24.inverse(), b)
    curves["A13(b)"] = ap(A13, b)
    curves["A13A24(b)"] = ap(A13 * A24, b)
    # the genus-one open book, in the curves it is identified with
    curves["V0"] = curves["A24^-1(b)"]
    curves["V1^1"] = b
    curves["V1^2"] = ap(A24.inverse() * A13, b)
    curves["V2"] = curves["A13(b)"]
    fam = NamedFamily("vhm-4holed", 1, pg, curves, {
        # D(A24^-1 b) D(b) D(A13 b) D(A13 A24 b)
        "phi_tilde": ("A13A24(b)", "A13(b)", "b", "A24^-1(b)"),
        # D(V0) D(V1^1) D(V1^2) D(V2)
        "phi": ("V2", "V1^2", "V1^1", "V0"),
    }, m)
    _validate_torus(fam, 4)
    gi = cv.geometric_intersection
    _check(gi(curves["V0"], curves["V1^1"]) == 2 and gi(curves["V0"], curves["V1^2"]) == 2,
           "i(V0, V1^j) != 2 on the four-holed torus")
    _check(gi(curves["V1^1"], curves["V1^2"]) == 0, "V1^1 and V1^2 intersect")
    return fam


# ----------------------------------------------------------------------------
# Building blocks: the three-holed torus cut along s, glued in a cycle
# ----------------------------------------------------------------------------

class BlockSurface:
    """g copies of the cut three-holed torus and lifting from one copy."""

    def __init__(self, g: int):
        self.g = g
        self.data = load_data("torus_blocks")
        d = self.data
        polys, glue = [], []
        for j in range(g):
            polys += [(f"lune{j}", d["lune"]), (f"rest{j}", d["rest"])]
            for (p, s), (q, t) in d["glue_in_block"]:
                glue.append(((f"{p}{j}", s), (f"{q}{j}", t)))
            (p, s), (q, t) = d["glue_next_block"]
            glue.append(((f"{p}{j}", s), (f"{q}{(j + 1) % g}", t)))
        self.model = PolygonModel(polys, glue)
        self.page = self.model.page

    def route(self, spec, j: int = 0):
        return [(f"{p}{j}", s) for p, s in spec]

    def arc(self, spec: dict, j: int = 0) -> CombArc:
        return self.model.arc((f"{spec['start'][0]}{j}", spec["start"][1]),
                              self.route(spec["exits"], j),
                              (f"{spec['end'][0]}{j}", spec["end"][1]))


@lru_cache(maxsize=None)
def _base_blocks() -> BlockSurface:
    return BlockSurface(1)


def lift(target: BlockSurface, x, block: int = 0):
    """The preimage-in-spirit of a curve or arc on the three-holed torus:
    the same route, switching block whenever it crosses s.

    A closed curve crossing s with net shift +-1 visits every block once; a
    curve missing s is copied into ``block``.
    """
    base = _base_blocks()
    where = {}
    for pid, _ in base.model.polygons:
        for k, t in enumerate(base.model.fan(pid)):
            where[t] = (pid[:-1], k)
    s_rest = base.model.side_half("rest0", "s")
    s_lune = base.model.side_half("lune0", "s")
    g = target.g

    def tri(t, j):
        kind, k = where[t]
        return target.model.fan(f"{kind}{j}")[k]

    def walk(path, j, closed):
        out = []
        start = j
        while True:
            for h in path:
                out.append(3 * tri(h // 3, j) + h % 3)
                if h == s_rest:
                    j = (j - 1) % g
                elif h == s_lune:
                    j = (j + 1) % g
            if not closed or j == start:
                return out, j

    if isinstance(x, CombCurve):
        out, _ = walk(x.path, block, True)
        return normalize(CombCurve(target.page, tuple(out)))
    (t0, k0), path, (t1, k1) = x.taut()
    out, j_end = walk(path, block, False)
    return normalize(CombArc.from_corners(target.page, (tri(t0, block), k0), out, (tri(t1, j_end), k1)))


@lru_cache(maxsize=None)
def _base_curves() -> dict:
    bs = _base_blocks()
    d = bs.data
    c = {n: bs.model.curve(bs.route(r)) for n, r in d["curves"].items()}
    for n, (p, s) in d["deltas"].items():
        c[n] = cv.boundary_curve(bs.page, bs.model.boundary_component_of(f"{p}0", s))
    T = D(c["a1"]) * D(c["a2"]) * D(c["a3"])
    c["T^-1(b)"] = mcg.apply(T.inverse(), c["b"])
    c["T(b)"] = mcg.apply(T, c["b"])
    c["s"] = bs.arc(d["arc_s"])
    return c


def build_vhm_3holed(_: int = 1) -> NamedFamily:
    bs = _base_blocks()
    c = dict(_base_curves())
    fam = NamedFamily("vhm-3holed", 1, bs.page, c, {
        # psi_1 = D(T^-1(b)) D(b) D(T(b))
        "psi": ("T(b)", "b", "T^-1(b)"),
    }, bs.model)
    _validate_torus(fam, 3)
    gi = cv.geometric_intersection
    s = c["s"]
    _check(gi(c["a1"], s) == 1, "s must cross a1 once")
    _check(all(gi(c[n], s) == 0 for n in ("b", "a2", "a3")), "s must miss b, a2, a3")
    vc = bs.page.vertex_component()
    _check(vc[s.start] != vc[s.end], "s must join two different boundary components")
    return fam


def build_thm_gplus2(g: int) -> NamedFamily:
    bs = BlockSurface(g)
    base = _base_curves()
    c: dict[str, Any] = {}
    c["U0"] = lift(bs, base["T^-1(b)"])
    for j in range(1, g + 1):
        c[f"U1^{j}"] = lift(bs, base["b"], j - 1)
    c["U2"] = lift(bs, base["T(b)"])
    c["gamma"] = lift(bs, base["a1"])
    for j in range(1, g + 1):
        c[f"beta_{j}"] = c[f"U1^{j}"]
        c[f"alpha_2,{j}"] = lift(bs, base["a2"], j - 1)
        c[f"alpha_5,{j}"] = lift(bs, base["a3"], j - 1)
    order = ["U0"] + [f"U1^{j}" for j in range(1, g + 1)] + ["U2"]
    fam = NamedFamily("thm-g+2", g, bs.page, c, {"psi": tuple(reversed(order))}, bs.model)
    sc = bs.page.classify()
    _check((sc.genus, sc.n_boundary) == (g, g + 2), f"thm-g+2: page is {sc}")
    gi = cv.geometric_intersection
    for j in range(1, g + 1):
        _check(gi(c["gamma"], c[f"beta_{j}"]) == 1, "gamma must cross each beta_j once")
        for k in range(j + 1, g + 1):
            _check(gi(c[f"beta_{j}"], c[f"beta_{k}"]) == 0, "beta curves intersect")
    return fam


# ----------------------------------------------------------------------------
# The common stabilization
# ----------------------------------------------------------------------------

def _twists(fam_curves: dict, names: list[str], page, sign: int = 1) -> mcg.MappingClassWord:
    return mcg.product(page, [D(fam_curves[n], sign) for n in names])


def build_stabilized(g: int) -> NamedFamily:
    """Sigma_{g,4g+2}: the g-block surface stabilized along alpha_{1,j},
    alpha_{3,j}, alpha_{4,j}, with every curve of both factorizations."""
    bs = BlockSurface(g)
    base = _base_blocks()
    up = build_thm_gplus2(g)
    carried = dict(up.curves)
    arcs = {}
    for kind in ("alpha1", "alpha3", "alpha4"):
        spec = base.data["stabilizing_arcs"][kind]
        for j in range(1, g + 1):
            arcs[f"alpha_{kind[-1]},{j}"] = lift(bs, base.arc(spec), j - 1)
    cores: dict[str, CombCurve] = {}
    pending = dict(arcs)
    for name in list(arcs):
        arc = pending.pop(name)
        st = attach_handle(arc, list(pending.values()))
        carried = {n: st.include(x) for n, x in carried.items()}
        cores = {n: st.include(x) for n, x in cores.items()}
        pending = {n: st.include(x) for n, x in pending.items()}
        cores[name] = st.core
    page = st.page
    c = dict(carried)
    c.update(cores)
    ap = mcg.apply
    J = range(1, g + 1)

    def tw(prefix, sign=1):
        return _twists(c, [f"{prefix}{j}" for j in J], page, sign)

    # the curves of phi_g expressed on the common page
    c["V0"] = ap(tw("alpha_4,"), c["U0"])
    for j in J:
        c[f"V1^{2 * j - 1}"] = ap(D(c[f"alpha_3,{j}"], -1) * D(c[f"alpha_4,{j}"]), c[f"beta_{j}"])
        c[f"V1^{2 * j}"] = c[f"beta_{j}"]
    c["V2"] = ap(tw("alpha_3,", -1), c["U2"])
    for j in J:
        c[f"eta_{j}"] = ap(D(c["V2"], -1) * D(c[f"beta_{j}"], -1), c[f"alpha_4,{j}"])

    psi_word = (["U0"] + [f"U1^{j}" for j in J] + ["U2"]
                + [f"alpha_1,{j}" for j in J] + [f"alpha_3,{j}" for j in J] + [f"alpha_4,{j}" for j in J])
    phi_word = (["V0"] + [f"V1^{i}" for i in range(1, 2 * g + 1)] + ["V2"]
                + [f"eta_{j}" for j in J] + [f"alpha_1,{j}" for j in J])
    fam = NamedFamily("stabilized-g", g, page, c, {
        "psi_hat": tuple(reversed(psi_word)),
        "phi_hat": tuple(reversed(phi_word)),
    })
    _validate_stabilized(fam)
    return fam


def _validate_stabilized(fam: NamedFamily):
    g = fam.parameter
    sc = fam.page.classify()
    _check((sc.genus, sc.n_boundary) == (g, 4 * g + 2), f"stabilized-g: page is {sc}")
    c = fam.curves
    gi = cv.geometric_intersection
    alphas = [f"alpha_{k},{j}" for k in (1, 3, 4) for j in range(1, g + 1)]
    for i, a in enumerate(alphas):
        for b in alphas[i + 1:]:
            _check(gi(c[a], c[b]) == 0, f"{a} and {b} intersect")
    for j in range(1, g + 1):
        _check(gi(c[f"alpha_3,{j}"], c[f"beta_{j}"]) == 1, "alpha_3,j must cross beta_j once")
    # same intersection pattern as the curves of phi_g on its own page
    v1 = [f"V1^{i}" for i in range(1, 2 * g + 1)]
    for i, a in enumerate(v1):
        _check(gi(c["V0"], c[a]) == 2 and gi(c["V2"], c[a]) == 2, f"{a}: wrong intersections")
        for b in v1[i + 1:]:
            _check(gi(c[a], c[b]) == 0, f"{a} and {b} intersect")
    _check(gi(c["V0"], c["V2"]) == 4 * g, "i(V0, V2) != 4g")


# ----------------------------------------------------------------------------

_BUILDERS = {
    "thm-ope": build_thm_ope,
    "thm-ope2": build_thm_ope2,
    "vhm-4holed": build_vhm_4holed,
    "vhm-3holed": build_vhm_3holed,
    "thm-g+2": build_thm_gplus2,
    "stabilized-g": build_stabilized,
}


@lru_cache(maxsize=None)
def build(name: str, parameter: int = 1) -> NamedFamily:
    """Build and validate a named family (cached; treat the result as read-only)."""
    if name not in _BUILDERS:
        raise UnknownFamily(name)
    if not isinstance(parameter, int) or parameter < 1:
        raise UnsupportedParameter(f"parameter must be a positive integer, got {parameter!r}")
    if name in ("vhm-4holed", "vhm-3holed") and parameter != 1:
        raise UnsupportedParameter(f"{name} exists only for genus one")
    return _BUILDERS[name](parameter)
