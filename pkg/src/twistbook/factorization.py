"""
Positive factorizations, Hurwitz moves, open books and stabilization.

A factorization is an ordered tuple of vanishing cycles (d_1, ..., d_k)
whose total monodromy is D(d_k) ... D(d_1): the first cycle acts first.
Indices in the public API are 1-based, as in the move
(..., d_i, d_{i+1}, ...) -> (..., d_{i+1}, D(d_{i+1})(d_i), ...).
"""
from __future__ import annotations

import hashlib
import json
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import curves as cv
from . import mcg
from .curves import CombArc, CombCurve, PageMismatch, normalize
from .mcg import D, MappingClassWord
from .surface import Triangulation


class IndexOutOfRange(IndexError):
    pass


class StepFailed(RuntimeError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class ArcEndpointsNotOnBoundary(ValueError):
    pass


class ArcNotEmbedded(ValueError):
    pass


def curve_hash(c) -> str:
    blob = json.dumps(cv.canonical_key(c), separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


class Factorization:
    __slots__ = ("page", "cycles")

    def __init__(self, page: Triangulation, cycles: Iterable[CombCurve] = ()):
        cycles = tuple(normalize(c) for c in cycles)
        for c in cycles:
            if not cv.same_page(c.page, page):
                raise PageMismatch("cycle lives on a different page")
            if c.is_trivial:
                raise mcg.TrivialTwistCurve("vanishing cycles must be essential")
        self.page = page
        self.cycles = cycles

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __getitem__(self, i):
        return self.cycles[i]

    def __repr__(self):
        return f"Factorization({len(self.cycles)} cycles, page={self.page.hash})"

    def keys(self) -> tuple:
        return tuple(cv.canonical_key(c) for c in self.cycles)

    def isotopic_to(self, other: "Factorization") -> bool:
        return cv.same_page(self.page, other.page) and self.keys() == other.keys()

    def hashes(self) -> list[str]:
        return [curve_hash(c) for c in self.cycles]

    def total_monodromy(self) -> MappingClassWord:
        return MappingClassWord(self.page, [mcg.TwistAtom(c, 1) for c in reversed(self.cycles)])

    def replace(self, i: int, c: CombCurve) -> "Factorization":
        cyc = list(self.cycles)
        cyc[i - 1] = c
        return Factorization(self.page, cyc)


def total_monodromy(f: Factorization) -> MappingClassWord:
    return f.total_monodromy()


def hurwitz_move(f: Factorization, i: int, direction: str = "forward") -> Factorization:
    """Elementary Hurwitz move on positions i, i+1 (1-based)."""
    if not 1 <= i < len(f):
        raise IndexOutOfRange(f"Hurwitz index {i} out of range for length {len(f)}")
    a, b = f.cycles[i - 1], f.cycles[i]
    if direction == "forward":
        new = (b, cv.twist(b, a, 1))
    elif direction == "inverse":
        new = (cv.twist(a, b, -1), a)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return Factorization(f.page, f.cycles[:i - 1] + new + f.cycles[i + 1:])


def cyclic_permute(f: Factorization, k: int) -> Factorization:
    """Rotate so that the cycle at 1-based position k+1 comes first."""
    n = len(f)
    if n == 0:
        return f
    k %= n
    return Factorization(f.page, f.cycles[k:] + f.cycles[:k])


def global_conjugate(f: Factorization, w: MappingClassWord) -> Factorization:
    return Factorization(f.page, [mcg.apply(w, c) for c in f.cycles])


@dataclass(frozen=True)
class OpenBook:
    page: Triangulation
    factorization: Factorization

    def monodromy(self) -> MappingClassWord:
        return self.factorization.total_monodromy()


# ----------------------------------------------------------------------------
# Scripts
# ----------------------------------------------------------------------------

STEP_KINDS = ("hurwitz", "hurwitz_inverse", "cyclic", "conjugate",
              "rewrite_conjugation", "replace_isotopic")


@dataclass
class Step:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise ValueError(f"unknown step kind {self.kind!r}")


@dataclass
class MoveScript:
    steps: list[Step] = field(default_factory=list)

    def add(self, kind: str, note: str = "", **params) -> "MoveScript":
        self.steps.append(Step(kind, params, note))
        return self

    def extend(self, other: "MoveScript") -> "MoveScript":
        self.steps.extend(other.steps)
        return self

    def __len__(self):
        return len(self.steps)

    def to_json(self, names: dict | None = None) -> dict:
        out = []
        for s in self.steps:
            p = {}
            for k, v in s.params.items():
                if isinstance(v, MappingClassWord):
                    v = v.to_json(names)
                elif isinstance(v, (CombCurve, CombArc)):
                    ref = names.get(v) if names else None
                    v = ref if ref is not None else v.to_json()
                p[k] = v
            out.append({"kind": s.kind, "params": p, "note": s.note})
        return {"steps": out}


def apply_step(f: Factorization, step: Step) -> Factorization:
    p = step.params
    if step.kind == "hurwitz":
        return hurwitz_move(f, p["i"], "forward")
    if step.kind == "hurwitz_inverse":
        return hurwitz_move(f, p["i"], "inverse")
    if step.kind == "cyclic":
        return cyclic_permute(f, p["k"])
    if step.kind == "conjugate":
        return global_conjugate(f, p["word"])
    if step.kind == "replace_isotopic":
        i, c = p["i"], p["curve"]
        if not cv.is_isotopic(f.cycles[i - 1], c):
            raise ValueError(f"cycle {i} is not isotopic to the replacement")
        return f.replace(i, c)
    if step.kind == "rewrite_conjugation":
        # cycle i is declared to be w(c): check D(w(c)) = w D(c) w^-1 and
        # that cycle i is that curve.
        i, w, c = p["i"], p["word"], p["curve"]
        img = mcg.apply(w, c)
        if not cv.is_isotopic(f.cycles[i - 1], img):
            raise ValueError(f"cycle {i} is not the image of the given curve")
        if not mcg.equal(D(img), w * D(c) * w.inverse()):
            raise ValueError("conjugation identity fails")
        return f.replace(i, img)
    raise ValueError(step.kind)


@dataclass
class Report:
    status: str
    steps: list[dict]
    final_hashes: list[str]
    target_hashes: list[str]
    seconds: float
    failed_step: int | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        return {"status": self.status, "steps": self.steps, "final": self.final_hashes,
                "target": self.target_hashes, "seconds": round(self.seconds, 3),
                "failed_step": self.failed_step, "reason": self.reason}


def run_script(start: Factorization, script: MoveScript, target: Factorization,
               *, raise_on_failure: bool = False) -> Report:
    """Replay the steps and compare the result with ``target`` cycle by cycle."""
    t0 = time.perf_counter()
    f = start
    records = []
    for k, step in enumerate(script.steps):
        before = f.hashes()
        ts = time.perf_counter()
        try:
            f = apply_step(f, step)
        except (ValueError, IndexError) as exc:
            rep = Report("refuted", records, f.hashes(), target.hashes(),
                         time.perf_counter() - t0, k, str(exc))
            if raise_on_failure:
                raise StepFailed(k, str(exc)) from exc
            return rep
        records.append({"index": k, "kind": step.kind, "note": step.note,
                        "params": {a: b for a, b in step.params.items() if isinstance(b, int)},
                        "before": before, "after": f.hashes(),
                        "seconds": round(time.perf_counter() - ts, 3)})
    ok = f.isotopic_to(target)
    rep = Report("verified" if ok else "refuted", records, f.hashes(), target.hashes(),
                 time.perf_counter() - t0, None if ok else len(script.steps),
                 "" if ok else "final tuple differs from the target")
    if not ok and raise_on_failure:
        raise StepFailed(len(script.steps), rep.reason)
    return rep


def hurwitz_search(start: Factorization, target: Factorization, budget: int = 3,
                   cyclic: bool = True) -> MoveScript | None:
    """Breadth-first search over Hurwitz moves (and rotations) up to depth
    ``budget``; returns a script reaching ``target`` or None."""
    goal = target.keys()
    seen = {start.keys(): None}
    q = deque([(start, MoveScript())])
    if start.keys() == goal:
        return MoveScript()
    while q:
        f, path = q.popleft()
        if len(path) >= budget:
            continue
        moves = [("hurwitz", {"i": i}) for i in range(1, len(f))]
        moves += [("hurwitz_inverse", {"i": i}) for i in range(1, len(f))]
        if cyclic:
            moves += [("cyclic", {"k": k}) for k in range(1, len(f))]
        for kind, params in moves:
            step = Step(kind, params)
            g = apply_step(f, step)
            key = g.keys()
            if key in seen:
                continue
            seen[key] = None
            p2 = MoveScript(path.steps + [step])
            if key == goal:
                return p2
            q.append((g, p2))
    return None


# ----------------------------------------------------------------------------
# Stabilization
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Stabilization:
    page: Triangulation
    core: CombCurve
    include: Any            # maps old curves/arcs to the new page


def _feet(t: Triangulation, v: int, w: int):
    out = []
    for f1 in (t.out_half[v], t.in_half[v]):
        for f2 in (t.in_half[w], t.out_half[w]):
            if f1 != f2:
                out.append((f1, f2))
    return out


def _add_ear(t: Triangulation, h: int) -> Triangulation:
    """Glue a triangle with one new vertex onto boundary half-edge h."""
    x, y = t.tail(h), t.head(h)
    n = t.n_triangles
    tris = list(t.triangles) + [(y, x, t.n_vertices)]
    twin = list(t.twin) + [h, -1, -1]
    twin[h] = 3 * n
    return Triangulation(tris, twin)


def _move(x, page: Triangulation):
    """The same curve or arc on a page containing x's page triangle-for-triangle."""
    if isinstance(x, CombCurve):
        return normalize(CombCurve(page, x.path))
    s, e = x.corners()
    return normalize(CombArc.from_corners(page, s, x.path, e))


def attach_handle(arc: CombArc, avoid: Sequence = ()) -> Stabilization:
    """Attach a 1-handle (two triangles) at the ends of ``arc``.

    The handle's feet are boundary edges f1 at the start and f2 at the end
    of the arc; the quadrilateral (head f1, tail f1, head f2, tail f2) is cut
    by the diagonal from tail f1 to tail f2.  Curves and arcs in ``avoid``
    must stay disjoint from the new core.
    """
    t = arc.page
    try:
        cv.check_embedded(arc)
    except cv.NotEmbedded as exc:
        raise ArcNotEmbedded(str(exc)) from exc
    v, w = arc.start, arc.end
    feet = _feet(t, v, w)
    if not feet:
        # a boundary circle made of one edge: subdivide it with an ear first
        ear = _add_ear(t, t.out_half[v])
        s0, e0 = arc.corners()
        sub = attach_handle(CombArc.from_corners(ear, s0, arc.path, e0),
                            [_move(x, ear) for x in avoid])
        return Stabilization(sub.page, sub.core,
                             lambda x, _i=sub.include, _p=ear: _i(_move(x, _p)))
    # With both ends at one vertex only one assignment of feet to ends
    # keeps the core embedded; otherwise the first choice always works.
    for f1, f2 in feet:
        new, core = _glue_handle(t, arc, f1, f2)
        try:
            cv.realize(core)
        except cv.NotEmbedded:
            continue
        if any(cv.geometric_intersection(core, _move(x, new)) for x in avoid):
            continue
        return Stabilization(new, core, lambda x: _move(x, new))
    raise ArcNotEmbedded("no handle attachment gives an embedded core")


def _glue_handle(t: Triangulation, arc: CombArc, f1: int, f2: int):
    v, w = arc.start, arc.end
    a, b = t.head(f1), t.tail(f1)
    c, d = t.head(f2), t.tail(f2)
    n = t.n_triangles
    T1, T2 = n, n + 1
    tris = list(t.triangles) + [(b, c, d), (d, a, b)]
    twin = list(t.twin) + [-1] * 6
    g2, g1 = 3 * T1 + 1, 3 * T2 + 1        # glued to f2 and f1
    twin[f2], twin[g2] = g2, f2
    twin[f1], twin[g1] = g1, f1
    twin[3 * T1 + 2], twin[3 * T2 + 2] = 3 * T2 + 2, 3 * T1 + 2
    new = Triangulation(tris, twin)

    # core: arc, then around w to f2, through the handle, around v to the start
    path = list(arc.path)
    if f2 == t.in_half[w]:
        path += list(t.fan_cross[w])
    path += [f2, 3 * T1 + 2, g1]
    if f1 == t.in_half[v]:
        path += [t.twin[h] for h in reversed(t.fan_cross[v])]
    core = normalize(CombCurve(new, tuple(path)))

    return new, core


def stabilize(ob: OpenBook, arc: CombArc, position: str = "append", avoid: Sequence = ()):
    """Positive stabilization along ``arc``.

    Returns (new open book, stabilization data).  ``append`` puts the new
    cycle last (it acts last: D(core) * monodromy); ``prepend`` puts it first.
    """
    if not cv.same_page(ob.page, arc.page):
        raise PageMismatch("arc lives on a different page")
    st = attach_handle(arc, avoid)
    old = [st.include(c) for c in ob.factorization.cycles]
    cyc = old + [st.core] if position == "append" else [st.core] + old
    if position not in ("append", "prepend"):
        raise ValueError("position must be 'append' or 'prepend'")
    return OpenBook(st.page, Factorization(st.page, cyc)), st
