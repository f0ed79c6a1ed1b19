"""
Words in Dehn twists and their action on curves and arcs.

A word is a sequence of signed twist atoms read as a composition of maps:
the rightmost atom acts first.  Equality of mapping classes is decided by
the Alexander method on the interior edges of the page.  Every vertex is
on the boundary, so the interior edges are properly embedded arcs cutting
the page into triangles; a boundary-fixing homeomorphism that fixes each
of them up to isotopy rel endpoints is isotopic to the identity (it can be
isotoped to fix the whole 1-skeleton, and then each triangle, a disk, is
handled by the Alexander trick).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import curves as cv
from .curves import CombArc, CombCurve, PageMismatch, normalize
from .surface import Triangulation


class TrivialTwistCurve(ValueError):
    pass


@dataclass(frozen=True)
class TwistAtom:
    curve: CombCurve
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not isinstance(self.curve, CombCurve):
            raise TypeError("twist curves must be closed curves")
        if self.curve.is_trivial:
            raise TrivialTwistCurve("cannot twist along a null-homotopic curve")

    def inverse(self) -> "TwistAtom":
        return TwistAtom(self.curve, -self.sign)


class MappingClassWord:
    """Immutable product of twists; ``atoms[0]`` is the leftmost factor."""

    __slots__ = ("page", "atoms")

    def __init__(self, page: Triangulation, atoms: Iterable[TwistAtom] = ()):
        atoms = tuple(atoms)
        for a in atoms:
            if not cv.same_page(a.curve.page, page):
                raise PageMismatch("atom curve lives on a different page")
        self.page = page
        self.atoms = atoms

    def __mul__(self, other: "MappingClassWord") -> "MappingClassWord":
        if not cv.same_page(self.page, other.page):
            raise PageMismatch("words live on different pages")
        return MappingClassWord(self.page, self.atoms + other.atoms)

    def inverse(self) -> "MappingClassWord":
        return MappingClassWord(self.page, [a.inverse() for a in reversed(self.atoms)])

    def __pow__(self, k: int) -> "MappingClassWord":
        if k < 0:
            return self.inverse() ** (-k)
        return MappingClassWord(self.page, self.atoms * k)

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        return (isinstance(other, MappingClassWord) and self.atoms == other.atoms
                and cv.same_page(self.page, other.page))

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        return "MappingClassWord(" + " ".join(
            ("D" if a.sign > 0 else "D^-1") + f"[{len(a.curve)}]" for a in self.atoms) + ")"

    def to_json(self, names: dict | None = None) -> dict:
        atoms = []
        for a in self.atoms:
            ref = names.get(a.curve) if names else None
            atoms.append({"curve": ref if ref is not None else a.curve.to_json(),
                          "sign": a.sign})
        return {"page": self.page.hash, "atoms": atoms}


def D(c: CombCurve, sign: int = 1) -> MappingClassWord:
    """The one-letter word D(c) (or its inverse for sign = -1)."""
    return MappingClassWord(c.page, [TwistAtom(normalize(c), sign)])


def Dinv(c: CombCurve) -> MappingClassWord:
    return D(c, -1)


def identity(page: Triangulation) -> MappingClassWord:
    return MappingClassWord(page)


def product(page: Triangulation, words: Sequence[MappingClassWord]) -> MappingClassWord:
    out = identity(page)
    for w in words:
        out = out * w
    return out


def apply(w: MappingClassWord, x):
    """Image of a curve or arc under ``w`` (rightmost atom first), normalized."""
    if not cv.same_page(w.page, x.page):
        raise PageMismatch("word and curve live on different pages")
    y = normalize(x)
    for a in reversed(w.atoms):
        y = cv.twist(a.curve, y, a.sign)
    return y


def conjugate_curve(w: MappingClassWord, c: CombCurve) -> CombCurve:
    return apply(w, c)


def rewrite_conjugation(word: MappingClassWord, start: int, length: int) -> MappingClassWord:
    """Replace atoms ``start .. start+length-1`` of the form ``u D(c)^e u^-1``
    by ``D(u(c))^e``, after checking the shape literally."""
    atoms = word.atoms
    block = atoms[start:start + length]
    if length % 2 == 0 or length < 1:
        raise ValueError("a conjugate block has odd length")
    k = length // 2
    u = MappingClassWord(word.page, block[:k])
    tail = MappingClassWord(word.page, block[k + 1:])
    if tail != u.inverse():
        raise ValueError("block is not of the form u D(c) u^-1")
    mid = block[k]
    new = TwistAtom(apply(u, mid.curve), mid.sign)
    return MappingClassWord(word.page, atoms[:start] + (new,) + atoms[start + length:])


def filling_arcs(page: Triangulation) -> list[CombArc]:
    """The Alexander filling system: every interior edge as an arc."""
    cache = cv._cache(page)
    arcs = cache.get("test_arcs")
    if arcs is None:
        arcs = []
        for e in page.interior_edges:
            h = page.edges[e][0]
            arcs.append(CombArc.from_corners(page, (h // 3, h % 3), (), (h // 3, (h % 3 + 1) % 3)))
        cache["test_arcs"] = arcs
    return arcs


def induced_h1_matrix(w: MappingClassWord) -> list[list[int]]:
    """Matrix (columns = images of basis classes) of w on H1 of the page.

    Each twist acts by the transvection x -> x + sign * i(c, x) [c].
    """
    pg = w.page
    basis = basis_loops(pg)
    r = len(basis)
    cols = [list(homology_vector(b)) for b in basis]
    # apply atoms right to left to every column
    for a in reversed(w.atoms):
        c = a.curve
        hc = cv.homology_class(c)
        form = intersection_form(pg)
        for col in cols:
            # algebraic intersection of c with the class col, via the form
            iota = sum(hc[p] * form[p][q] * col[q] for p in range(r) for q in range(r)
                       if hc[p] and col[q])
            if iota:
                for k in range(r):
                    col[k] += a.sign * iota * hc[k]
    return [[cols[j][i] for j in range(r)] for i in range(r)]


def homology_vector(c: CombCurve) -> tuple[int, ...]:
    return cv.homology_class(c)


def basis_loops(page: Triangulation) -> list[CombCurve]:
    """One closed curve per H1 basis edge: the edge plus a tree path back."""
    cache = cv._cache(page)
    if "basis_loops" in cache:
        return cache["basis_loops"]
    basis = cv.h1_basis(page)
    basis_set = set(basis)
    # BFS tree paths from triangle 0
    parent = {0: None}
    order = [0]
    for t in order:
        for i in range(3):
            h = 3 * t + i
            o = page.twin[h]
            if o >= 0 and page.edge_of[h] not in basis_set and o // 3 not in parent:
                parent[o // 3] = h
                order.append(o // 3)

    def path_from_root(t):
        out = []
        while parent[t] is not None:
            h = parent[t]
            out.append(h)
            t = h // 3
        return out[::-1]

    loops = []
    for e in basis:
        h = page.edges[e][0]
        p = path_from_root(h // 3) + [h] + cv.reverse_path(page, path_from_root(page.twin[h] // 3))
        loops.append(CombCurve(page, tuple(cv.cyclic_reduce(page, p))))
    cache["basis_loops"] = loops
    return loops


def intersection_form(page: Triangulation) -> list[list[int]]:
    """Algebraic intersection numbers of the basis loops.

    A basis loop is a simple cycle of the dual graph, hence an embedded
    curve, and its class is the corresponding unit vector; by bilinearity
    i(c, x) = [c]^T F [x].
    """
    cache = cv._cache(page)
    if "form" not in cache:
        loops = basis_loops(page)
        cache["form"] = [[cv.algebraic_intersection(a, b) if a is not b else 0 for b in loops]
                         for a in loops]
    return cache["form"]


def equal(w1: MappingClassWord, w2: MappingClassWord, *, use_homology: bool = True) -> bool:
    """Decide w1 = w2 in the mapping class group of the page (rel boundary)."""
    if not cv.same_page(w1.page, w2.page):
        raise PageMismatch("words live on different pages")
    if w1.atoms == w2.atoms:
        return True
    if use_homology and induced_h1_matrix(w1) != induced_h1_matrix(w2):
        return False
    return first_difference(w1, w2) is None


def first_difference(w1: MappingClassWord, w2: MappingClassWord):
    """First filling arc whose images under w1 and w2 differ, or None."""
    for arc in filling_arcs(w1.page):
        if cv.canonical_key(apply(w1, arc)) != cv.canonical_key(apply(w2, arc)):
            return arc
    return None


def is_identity(w: MappingClassWord) -> bool:
    return equal(w, identity(w.page))


def word_from_json(page: Triangulation, data: dict, table: dict | None = None) -> MappingClassWord:
    """Inverse of ``to_json``; curve references are looked up in ``table``."""
    if data.get("page") not in (None, page.hash):
        raise PageMismatch("word belongs to a different page")
    atoms = []
    for a in data["atoms"]:
        ref = a["curve"]
        c = table[ref] if isinstance(ref, str) else cv.curve_from_json(page, ref)
        atoms.append(TwistAtom(normalize(c), int(a.get("sign", 1))))
    return MappingClassWord(page, atoms)
