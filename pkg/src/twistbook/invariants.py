"""
Exact integer linear algebra and homology of pages, open books and
Lefschetz fibrations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import curves as cv
from . import mcg
from .surface import Triangulation

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None):
    """Return (D, U, V) with U m V = D, U and V unimodular, D diagonal with
    d1 | d2 | ... and nonnegative entries.

    Pivots are chosen with least absolute value; Python integers never
    overflow.  The product is re-checked before returning.
    """
    A = [list(map(int, row)) for row in m]
    rows = len(A)
    cols = len(A[0]) if rows else (ncols or 0)
    U = identity_matrix(rows)
    V = identity_matrix(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):          # row dst += k * row src
        if k:
            A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):          # col dst += k * col src
        if k:
            for M in (A, V):
                for row in M:
                    row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        # least nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot and repeat
                best = (abs(p), t, t)
                for i in range(t + 1, rows):
                    if A[i][t] and abs(A[i][t]) < best[0]:
                        best = (abs(A[i][t]), i, t)
                for j in range(t + 1, cols):
                    if A[t][j] and abs(A[t][j]) < best[0]:
                        best = (abs(A[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            # divisibility: pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    if matmul(matmul(U, [list(map(int, r)) for r in m]), V) != A and rows and cols:
        raise AssertionError("Smith normal form self-check failed")
    return A, U, V


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(self.torsion)
        for x in t:
            if x < 2:
                raise ValueError("torsion coefficients must be at least 2")
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def cokernel(cls, m: Sequence[Sequence[int]], n_generators: int) -> "AbelianGroup":
        """Z^n modulo the span of the rows of m."""
        if not m:
            return cls(n_generators)
        D, _, _ = smith_normal_form(m, n_generators)
        diag = [D[i][i] for i in range(min(len(D), n_generators))]
        nonzero = [abs(d) for d in diag if d]
        return cls(n_generators - len(nonzero), tuple(d for d in nonzero if d > 1))

    def __str__(self):
        parts = []
        if self.free_rank or not self.torsion:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 0 and not self.torsion:
            return "0"
        return " ⊕ ".join(parts)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def parse_group(text: str) -> AbelianGroup:
    """Inverse of str(AbelianGroup); '+' is accepted for the sum sign."""
    text = text.strip()
    if text == "0":
        return AbelianGroup(0)
    r, tors = 0, []
    for part in text.replace("+", "⊕").split("⊕"):
        part = part.strip()
        if part.startswith("Z/"):
            tors.append(int(part[2:]))
        elif part == "Z":
            r += 1
        elif part.startswith("Z^"):
            r += int(part[2:])
        else:
            raise ValueError(f"cannot parse group component {part!r}")
    n = r + len(tors)
    rels = [[d if j == i else 0 for j in range(n)] for i, d in enumerate(tors)]
    return AbelianGroup.cokernel(rels, n)


def h1_page(t: Triangulation):
    """(group, basis): H1 of the page is free; basis = non-tree interior edges."""
    basis = cv.h1_basis(t)
    return AbelianGroup(len(basis)), basis


def h1_open_book(page: Triangulation, monodromy) -> AbelianGroup:
    """H1 of the closed 3-manifold of the open book (page, monodromy).

    ``monodromy`` is a word or a factorization.  Relations: for each interior
    edge e, the loop e followed by the reverse of its image.
    """
    w = monodromy if isinstance(monodromy, mcg.MappingClassWord) else monodromy.total_monodromy()
    rels = []
    for arc in mcg.filling_arcs(page):
        img = mcg.apply(w, arc)
        loop = list(arc.path) + cv.reverse_path(page, img.path)
        rels.append(list(cv.path_class(page, loop)))
    return AbelianGroup.cokernel(rels, len(cv.h1_basis(page)))


@dataclass(frozen=True)
class LefschetzInvariants:
    chi: int
    h1: AbelianGroup
    h2_rank: int

    def to_json(self) -> dict:
        return {"chi": self.chi, "h1": self.h1.to_json(), "h2_rank": self.h2_rank}


def lefschetz_invariants(page: Triangulation, cycles) -> LefschetzInvariants:
    cyc = list(getattr(cycles, "cycles", cycles))
    n = len(cv.h1_basis(page))
    classes = [list(cv.homology_class(c)) for c in cyc]
    h1 = AbelianGroup.cokernel(classes, n)
    rank = 0
    if classes:
        D, _, _ = smith_normal_form(classes, n)
        rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return LefschetzInvariants(page.euler_characteristic() + len(cyc), h1, len(cyc) - rank)
