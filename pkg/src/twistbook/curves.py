"""
Simple closed curves and arcs on a triangulated page.

Every vertex of a page lies on the boundary, so the dual graph (one node
per triangle, one link per interior edge) is a spine.  A curve is stored as
the sequence of half-edges it crosses: crossing ``h`` moves from triangle
``tri(h)`` into ``tri(twin(h))``.  For a closed curve the sequence is cyclic
and consecutive entries satisfy ``tri(twin(h_i)) == tri(h_{i+1})``.

An arc runs between two boundary vertices.  Each vertex ``v`` has a fan of
corners ordered counterclockwise from the corner next to its outgoing
boundary side; an arc is stored as a path from the triangle of the first
corner of its start vertex to the triangle of the first corner of its end
vertex.  Sliding an endpoint through the fan is a homotopy rel endpoints, so
free reduction of that path is a complete isotopy invariant.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .surface import Triangulation


class CurveError(ValueError):
    pass


class NotEmbedded(CurveError):
    pass


class PageMismatch(CurveError):
    pass


def _cache(page: Triangulation) -> dict:
    c = page.__dict__.get("_curve_cache")
    if c is None:
        c = {}
        page.__dict__["_curve_cache"] = c
    return c


def same_page(a: Triangulation, b: Triangulation) -> bool:
    return a is b or a == b


# ----------------------------------------------------------------------------
# Words in the dual graph
# ----------------------------------------------------------------------------

def free_reduce(page: Triangulation, path: Sequence[int]) -> list[int]:
    out: list[int] = []
    tw = page.twin
    for h in path:
        if out and tw[out[-1]] == h:
            out.pop()
        else:
            out.append(h)
    return out


def cyclic_reduce(page: Triangulation, path: Sequence[int]) -> list[int]:
    p = free_reduce(page, path)
    tw = page.twin
    i, j = 0, len(p)
    while j - i >= 2 and tw[p[j - 1]] == p[i]:
        i += 1
        j -= 1
    return p[i:j]


def least_rotation(s: Sequence[int]) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(s)
    if n == 0:
        return 0
    ss = list(s) + list(s)
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = ss[j]
        i = f[j - k - 1]
        while i != -1 and sj != ss[k + i + 1]:
            if sj < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != ss[k + i + 1]:
            if sj < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def _min_rotation(s: Sequence[int]) -> tuple[int, ...]:
    k = least_rotation(s)
    return tuple(s[k:]) + tuple(s[:k])


def reverse_path(page: Triangulation, path: Sequence[int]) -> list[int]:
    tw = page.twin
    return [tw[h] for h in reversed(path)]


def check_path(page: Triangulation, path: Sequence[int], closed: bool):
    tw = page.twin
    n = len(path)
    for i, h in enumerate(path):
        if not 0 <= h < len(tw) or tw[h] < 0:
            raise CurveError(f"half-edge {h} is not interior")
        if i + 1 < n or closed:
            nxt = path[(i + 1) % n]
            if tw[h] // 3 != nxt // 3:
                raise CurveError(f"path breaks between positions {i} and {(i + 1) % n}")


# ----------------------------------------------------------------------------
# Curve and arc values
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CombCurve:
    """Unoriented closed curve; ``path`` is one traversal of it."""

    page: Triangulation
    path: tuple[int, ...]

    kind = "closed"

    def __post_init__(self):
        check_path(self.page, self.path, closed=True)

    def __eq__(self, other):
        return (isinstance(other, CombCurve) and self.path == other.path
                and same_page(self.page, other.page))

    def __hash__(self):
        return hash(("closed", self.path))

    def __len__(self):
        return len(self.path)

    @property
    def is_trivial(self) -> bool:
        return len(cyclic_reduce(self.page, self.path)) == 0

    def reversed(self) -> "CombCurve":
        return CombCurve(self.page, tuple(reverse_path(self.page, self.path)))

    def crossings(self) -> list[list[int]]:
        """(triangle, entry side, exit side) for each triangle visited."""
        p, n = self.path, len(self.path)
        tw = self.page.twin
        return [[h // 3, tw[p[i - 1]] % 3, h % 3] for i, h in enumerate(p)] if n else []

    def to_json(self) -> dict:
        return {"page": self.page.hash, "kind": "closed", "crossings": self.crossings(),
                "path": list(self.path)}

    def __repr__(self):
        return f"CombCurve(len={len(self.path)})"


@dataclass(frozen=True, eq=False)
class CombArc:
    """Arc from boundary vertex ``start`` to boundary vertex ``end``.

    ``path`` runs between the first-corner triangles of the two endpoints.
    """

    page: Triangulation
    start: int
    path: tuple[int, ...]
    end: int

    kind = "arc"

    def __post_init__(self):
        pg = self.page
        check_path(pg, self.path, closed=False)
        t0 = pg.fans[self.start][0].triangle
        t1 = pg.fans[self.end][0].triangle
        if self.path:
            if self.path[0] // 3 != t0 or pg.twin[self.path[-1]] // 3 != t1:
                raise CurveError("arc path does not join the endpoint fans")
        elif t0 != t1:
            raise CurveError("empty arc path between different triangles")

    def __eq__(self, other):
        return (isinstance(other, CombArc) and self.path == other.path
                and self.start == other.start and self.end == other.end
                and same_page(self.page, other.page))

    def __hash__(self):
        return hash(("arc", self.start, self.path, self.end))

    def __len__(self):
        return len(self.path)

    @classmethod
    def from_corners(cls, page: Triangulation, start: tuple[int, int],
                     path: Sequence[int], end: tuple[int, int]) -> "CombArc":
        """Arc leaving corner ``start`` = (triangle, index), crossing ``path``,
        and arriving at corner ``end``.  The result is freely reduced."""
        v, i = page.corner_pos[tuple(start)]
        w, j = page.corner_pos[tuple(end)]
        if path:
            if path[0] // 3 != start[0] or page.twin[path[-1]] // 3 != end[0]:
                raise CurveError("path does not join the given corners")
        elif start[0] != end[0]:
            raise CurveError("empty path between different triangles")
        pre = list(page.fan_cross[v][:i])
        suf = [page.twin[h] for h in reversed(page.fan_cross[w][:j])]
        return cls(page, v, tuple(free_reduce(page, pre + list(path) + suf)), w)

    def reversed(self) -> "CombArc":
        return CombArc(self.page, self.end, tuple(reverse_path(self.page, self.path)), self.start)

    def corners(self) -> tuple[tuple[int, int], tuple[int, int]]:
        a = self.page.fans[self.start][0]
        b = self.page.fans[self.end][0]
        return (a.triangle, a.index), (b.triangle, b.index)

    def taut(self) -> tuple[tuple[int, int], tuple[int, ...], tuple[int, int]]:
        """Corner form with fan crossings trimmed from both ends."""
        pg = self.page
        p = list(self.path)
        i = j = 0
        fv, fw = pg.fan_cross[self.start], pg.fan_cross[self.end]
        lo, hi = 0, len(p)
        while lo < hi and i < len(fv) and p[lo] == fv[i]:
            lo += 1
            i += 1
        while hi > lo and j < len(fw) and p[hi - 1] == pg.twin[fw[j]]:
            hi -= 1
            j += 1
        a, b = pg.fans[self.start][i], pg.fans[self.end][j]
        return (a.triangle, a.index), tuple(p[lo:hi]), (b.triangle, b.index)

    def crossings(self) -> list[list[int]]:
        """As for closed curves; a corner ``k`` is written as ``3 + k``."""
        (t0, k0), p, (t1, k1) = self.taut()
        tw = self.page.twin
        if not p:
            return [[t0, 3 + k0, 3 + k1]]
        out = [[t0, 3 + k0, p[0] % 3]]
        for i in range(1, len(p)):
            out.append([p[i] // 3, tw[p[i - 1]] % 3, p[i] % 3])
        out.append([t1, tw[p[-1]] % 3, 3 + k1])
        return out

    def to_json(self) -> dict:
        return {"page": self.page.hash, "kind": "arc", "crossings": self.crossings(),
                "endpoints": [self.start, self.end], "path": list(self.path)}

    def __repr__(self):
        return f"CombArc({self.start}->{self.end}, len={len(self.path)})"


def closed_curve(page: Triangulation, path: Sequence[int]) -> CombCurve:
    return normalize(CombCurve(page, tuple(path)))


def curve_from_json(page: Triangulation, data: dict):
    if data.get("page") not in (None, page.hash):
        raise PageMismatch("curve belongs to a different page")
    if data["kind"] == "closed":
        if "path" in data:
            return normalize(CombCurve(page, tuple(data["path"])))
        return normalize(CombCurve(page, tuple(_path_from_crossings(page, data["crossings"]))))
    if "path" in data:
        s, e = data["endpoints"]
        return normalize(CombArc(page, s, tuple(data["path"]), e))
    cr = data["crossings"]
    path = [3 * t + x for t, _, x in cr[:-1]]
    return normalize(CombArc.from_corners(page, (cr[0][0], cr[0][1] - 3), path,
                                          (cr[-1][0], cr[-1][2] - 3)))


def _path_from_crossings(page, crossings):
    return [3 * t + x for t, _, x in crossings]


# ----------------------------------------------------------------------------
# Normal forms
# ----------------------------------------------------------------------------

def normalize(c):
    """Canonical representative: reduced, with the least rotation/direction."""
    pg = c.page
    if isinstance(c, CombCurve):
        p = cyclic_reduce(pg, c.path)
        if not p:
            return CombCurve(pg, ())
        best = min(_min_rotation(p), _min_rotation(reverse_path(pg, p)))
        return CombCurve(pg, best)
    if isinstance(c, CombArc):
        p = tuple(free_reduce(pg, c.path))
        return CombArc(pg, c.start, p, c.end)
    raise TypeError(f"not a curve: {c!r}")


def canonical_key(c) -> tuple:
    """Hashable isotopy invariant (arcs are unoriented, endpoints fixed)."""
    n = normalize(c)
    if isinstance(n, CombCurve):
        return ("closed", n.path)
    r = n.reversed()
    return ("arc",) + min((n.start, n.path, n.end), (r.start, r.path, r.end))


def is_isotopic(a, b) -> bool:
    if not same_page(a.page, b.page):
        raise PageMismatch("curves live on different pages")
    if a.kind != b.kind:
        return False
    return canonical_key(a) == canonical_key(b)


def edge_vector(c) -> tuple[int, ...]:
    """How many times the taut form crosses each edge of the page."""
    pg = c.page
    v = [0] * pg.n_edges
    if isinstance(c, CombArc):
        path = c.taut()[1]
    else:
        path = normalize(c).path
    for h in path:
        v[pg.edge_of[h]] += 1
    return tuple(v)


# ----------------------------------------------------------------------------
# Boundary curves
# ----------------------------------------------------------------------------

def boundary_curve(page: Triangulation, component: int) -> CombCurve:
    """Curve parallel to a boundary component, oriented with the boundary."""
    cyc = page.boundary_components()[component]
    path = []
    for h in cyc:
        v = page.tail(h)
        path.extend(page.twin[x] for x in reversed(page.fan_cross[v]))
    return CombCurve(page, tuple(path))


def is_boundary_parallel(c: CombCurve):
    """Index of the boundary component ``c`` is parallel to, or None."""
    key = canonical_key(c)
    if key[1] == ():
        return None
    cache = _cache(c.page)
    table = cache.get("boundary_keys")
    if table is None:
        table = {}
        for i in range(len(c.page.boundary_components())):
            table.setdefault(canonical_key(boundary_curve(c.page, i)), i)
        cache["boundary_keys"] = table
    return table.get(key)


# ----------------------------------------------------------------------------
# Homology
# ----------------------------------------------------------------------------

def h1_basis(page: Triangulation) -> tuple[int, ...]:
    """Interior edges off a BFS spanning tree of the dual graph.

    Each such edge closes one loop of the spine; the loops form a basis of
    H1 of the page, and a closed curve's class is its signed crossing count
    of these edges (positive when crossing the edge's primary half-edge).
    """
    cache = _cache(page)
    if "h1_basis" in cache:
        return cache["h1_basis"]
    seen = {0}
    tree = set()
    q = deque([0])
    while q:
        t = q.popleft()
        for i in range(3):
            o = page.twin[3 * t + i]
            if o >= 0 and o // 3 not in seen:
                seen.add(o // 3)
                tree.add(page.edge_of[o])
                q.append(o // 3)
    basis = tuple(e for e in page.interior_edges if e not in tree)
    cache["h1_basis"] = basis
    cache["h1_index"] = {e: i for i, e in enumerate(basis)}
    return basis


def path_class(page: Triangulation, path: Sequence[int]) -> tuple[int, ...]:
    """Signed count of basis-edge crossings along a closed path."""
    h1_basis(page)
    idx = _cache(page)["h1_index"]
    vec = [0] * len(idx)
    for h in path:
        e = page.edge_of[h]
        k = idx.get(e)
        if k is not None:
            vec[k] += 1 if page.edges[e][0] == h else -1
    return tuple(vec)


def homology_class(c, direction: int = 1) -> tuple[int, ...]:
    """Class of the closed curve traversed along ``path`` (or against it)."""
    vec = path_class(c.page, c.path)
    return vec if direction >= 0 else tuple(-x for x in vec)


# ----------------------------------------------------------------------------
# Embedded realization and transverse placement
# ----------------------------------------------------------------------------
#
# Ray codes.  Orient a strand so that it enters triangle T through side s.
# Its next move is coded by how far left it goes: 1 = exits side s+2 (left
# turn), 3 = exits side s+1 (right turn); an arc ending at a corner is coded
# 0 (v_s), 2 (v_{s+2}) or 4 (v_{s+1}).  Strands crossing one edge are
# ordered left to right, as seen entering tri(p) through the primary
# half-edge p, by lexicographic order of their code sequences.

_CORNER_CODE = (0, 4, 2)


def _turn(a: int, b: int) -> int:
    return 3 if (b - a) % 3 == 1 else 1


@dataclass
class _Chords:
    """A curve or arc split into per-triangle chords.

    Chord i lies in ``tri[i]`` and runs from port ``a[i]`` to port ``b[i]``;
    a port is a side 0..2 or a corner 3..5.  For i < len(path) the chord
    ends by crossing ``path[i]``.
    """

    path: tuple[int, ...]
    closed: bool
    tri: list
    a: list
    b: list
    fwd: list           # code of chord i when traversed forward
    bwd: list           # code of chord i when traversed backward


def _chords(page: Triangulation, path: Sequence[int], closed: bool,
            start=None, end=None) -> _Chords:
    tw = page.twin
    n = len(path)
    tri, a, b, fwd, bwd = [], [], [], [], []
    if closed:
        for i, h in enumerate(path):
            s, x = tw[path[i - 1]] % 3, h % 3
            tri.append(h // 3)
            a.append(s)
            b.append(x)
            fwd.append(_turn(s, x))
            bwd.append(_turn(x, s))
    else:
        (t0, k0), (t1, k1) = start, end
        ports = [(t0, 3 + k0)]
        for i in range(n):
            ports.append((tw[path[i]] // 3, tw[path[i]] % 3))
        exits = [h % 3 for h in path] + [3 + k1]
        for i in range(n + 1):
            t, s = ports[i]
            x = exits[i]
            tri.append(t)
            a.append(s)
            b.append(x)
            fwd.append(_turn(s, x) if x < 3 else _CORNER_CODE[(x - 3 - s) % 3])
            bwd.append(_turn(x, s) if s < 3 else _CORNER_CODE[(s - 3 - x) % 3])
    return _Chords(tuple(path), closed, tri, a, b, fwd, bwd)


def _ray(ch: _Chords, i: int, forward: bool, length: int) -> tuple:
    """Codes met after the crossing at the end of chord i, in one direction."""
    n = len(ch.path)
    if ch.closed:
        if forward:
            return tuple(ch.fwd[(i + 1 + k) % n] for k in range(length))
        return tuple(ch.bwd[(i - k) % n] for k in range(length))
    if forward:
        return tuple(ch.fwd[i + 1:i + 1 + length])
    lo = max(0, i + 1 - length)
    return tuple(reversed(ch.bwd[lo:i + 1]))


class Realization:
    """An embedded copy of a simple closed curve, strands ordered per edge."""

    def __init__(self, curve: CombCurve):
        pg = curve.page
        self.page = pg
        p = cyclic_reduce(pg, curve.path)
        if not p:
            raise CurveError("trivial curve has no realization")
        self.path = tuple(p)
        n = len(p)
        self.n = n
        ch = _chords(pg, p, True)
        self.chords = ch
        # Doubled code tables so a ray of any length is a slice.
        self._F = ch.fwd
        self._B = ch.bwd[::-1]                     # B[k] = bwd[n-1-k]
        by_edge: dict[int, list[tuple[tuple, int]]] = {}
        for j, h in enumerate(p):
            e = pg.edge_of[h]
            key = self._ray(j, h != pg.edges[e][0], n)
            by_edge.setdefault(e, []).append((key, j))
        self.order: dict[int, list[int]] = {}      # edge -> strands left to right
        self.rank = [0] * n
        for e, lst in by_edge.items():
            lst.sort()
            for k in range(len(lst) - 1):
                if lst[k][0] == lst[k + 1][0]:
                    raise NotEmbedded("curve is a proper power or meets itself")
            self.order[e] = [j for _, j in lst]
            for r, (_, j) in enumerate(lst):
                self.rank[j] = r
        self._check_simple()

    def table(self, j: int, forward: bool, length: int) -> tuple[list, int]:
        """(codes, offset) with the ray from strand j at codes[offset:]."""
        n = self.n
        if forward:
            key, src, off = "F", self._F, (j + 1) % n
        else:
            key, src, off = "B", self._B, (n - 1 - j) % n
        tabs = self.__dict__.setdefault("_tables", {})
        tab = tabs.get(key)
        if tab is None or len(tab) < off + length:
            tab = src * ((off + length) // n + 1)
            tabs[key] = tab
        return tab, off

    def _ray(self, j: int, forward: bool, length: int) -> tuple:
        tab, off = self.table(j, forward, length)
        return tuple(tab[off:off + length])

    def ray(self, j: int, forward: bool, length: int) -> tuple:
        return self._ray(j, forward, length)

    def count(self, e: int) -> int:
        return len(self.order.get(e, ()))

    def position(self, h: int, j: int) -> int:
        """ccw position of strand j along half-edge h inside tri(h)."""
        e = self.page.edge_of[h]
        r = self.rank[j]
        return r if self.page.edges[e][0] == h else self.count(e) - 1 - r

    def triangle_chords(self) -> dict[int, list[tuple[int, int, int]]]:
        """triangle -> list of (circle coord in, circle coord out, strand j)."""
        cached = getattr(self, "_tri_chords", None)
        if cached is not None:
            return cached
        pg, p, n = self.page, self.path, self.n
        out: dict[int, list] = {}
        for j in range(n):
            hin = pg.twin[p[j - 1]]
            hout = p[j]
            A = (hin % 3, 2 * self.position(hin, (j - 1) % n) + 1)
            B = (hout % 3, 2 * self.position(hout, j) + 1)
            out.setdefault(hout // 3, []).append((A, B, j))
        self._tri_chords = out
        return out

    def _check_simple(self):
        for t, chords in self.triangle_chords().items():
            pts = []
            for A, B, j in chords:
                pts.append((A, j))
                pts.append((B, j))
            pts.sort()
            stack = []
            for _, j in pts:
                if stack and stack[-1] == j:
                    stack.pop()
                else:
                    stack.append(j)
            if stack:
                raise NotEmbedded(f"strands cross inside triangle {t}")


def realize(c: CombCurve) -> Realization:
    cache = _cache(c.page).setdefault("realizations", {})
    key = normalize(c).path
    r = cache.get(key)
    if r is None:
        r = Realization(CombCurve(c.page, key))
        if len(cache) > 4096:
            cache.clear()
        cache[key] = r
    return r


def check_embedded(c) -> None:
    """Raise NotEmbedded unless ``c`` has a simple realization."""
    if isinstance(c, CombCurve):
        if not normalize(c).path:
            return
        realize(c)
        return
    _check_arc_simple(c)


def _check_arc_simple(arc: "CombArc"):
    # An arc is simple iff its chords, ordered per edge by the ray rule in
    # both directions, do not interleave inside any triangle.
    pg = arc.page
    s, p, e = arc.taut()
    if not p:
        return
    ch = _chords(pg, p, False, s, e)
    m = len(p)
    by_edge: dict[int, list] = {}
    for i, h in enumerate(p):
        ed = pg.edge_of[h]
        fwd = h != pg.edges[ed][0]
        by_edge.setdefault(ed, []).append((_ray(ch, i, fwd, m + 2), i))
    rank = [0] * m
    size = {}
    for ed, lst in by_edge.items():
        lst.sort()
        size[ed] = len(lst)
        for r, (_, i) in enumerate(lst):
            rank[i] = r

    def pos(h, i):
        ed = pg.edge_of[h]
        return rank[i] if pg.edges[ed][0] == h else size[ed] - 1 - rank[i]

    per_tri: dict[int, list] = {}
    for i in range(m + 1):
        if i == 0:
            A = (s[1], -1)
        else:
            hin = pg.twin[p[i - 1]]
            A = (hin % 3, 2 * pos(hin, i - 1) + 1)
        B = (p[i] % 3, 2 * pos(p[i], i) + 1) if i < m else (e[1], -1)
        per_tri.setdefault(ch.tri[i], []).append((A, B, i))
    for t, chords in per_tri.items():
        pts = sorted([(A, i) for A, B, i in chords] + [(B, i) for A, B, i in chords])
        stack = []
        for _, i in pts:
            if stack and stack[-1] == i:
                stack.pop()
            else:
                stack.append(i)
        if stack:
            raise NotEmbedded(f"arc meets itself inside triangle {t}")


def _circle(side: int, pos: int, width: int) -> int:
    return side * width + pos + 1


def _in_arc(p: int, q: int, x: int) -> bool:
    if p < q:
        return p < x < q
    return x > p or x < q


def _compare_codes(a: list, ai: int, b: list, bi: int, length: int) -> int:
    """Sign of a[ai:ai+length] compared with b[bi:bi+length]; most rays part
    within a few steps, so slices grow geometrically."""
    pos, step = 0, 8
    while pos < length:
        end = min(length, pos + step)
        x, y = a[ai + pos:ai + end], b[bi + pos:bi + end]
        if x != y:
            return -1 if x < y else 1
        pos, step = end, step * 4
    return 0


@dataclass
class Crossing:
    chord: int          # index of the chord of x
    strand: int         # index j of the chord of c
    right_to_left: bool
    along: int          # order key along the chord of x


def transverse_crossings(real: Realization, x) -> tuple[_Chords, list[list[Crossing]]]:
    """Place ``x`` transversely to the embedded ``real`` and list crossings.

    Each strand of x is slotted between the strands of c by comparing rays;
    the result is a genuine transverse picture, so surgery along it realizes
    the twist for any x, and for taut x it is in minimal position with c.
    """
    pg = real.page
    if isinstance(x, CombCurve):
        path = tuple(cyclic_reduce(pg, x.path))
        ch = _chords(pg, path, True)
    else:
        s, path, e = x.taut()
        ch = _chords(pg, path, False, s, e)
    m = len(path)
    L = m + real.n + 3
    xtab = ch.fwd * ((m + 1 + L) // max(m, 1) + 1) if ch.closed else ch.fwd
    slot = [0] * m
    for i, h in enumerate(path):
        e = pg.edge_of[h]
        order = real.order.get(e)
        if not order:
            continue
        # Compare in the direction x travels; seen crossing the primary
        # half-edge the left-to-right order of c is reversed.
        primary = pg.edges[e][0] == h
        if primary:
            order = order[::-1]
        if ch.closed:
            xoff = i + 1
            length = L
        else:
            xoff = i + 1
            length = max(0, min(L, len(xtab) - xoff))
        lo, hi = 0, len(order)
        while lo < hi:
            mid = (lo + hi) // 2
            j = order[mid]
            ctab, coff = real.table(j, real.path[j] == h, length)
            d = _compare_codes(ctab, coff, xtab, xoff, length)
            if d == 0:
                raise CurveError("strand runs parallel to the twist curve forever")
            if d < 0:
                lo = mid + 1
            else:
                hi = mid
        slot[i] = len(order) - lo if primary else lo

    def xpos(h, i):
        e = pg.edge_of[h]
        return 2 * slot[i] if pg.edges[e][0] == h else 2 * (real.count(e) - slot[i])

    width = 2 * max([len(v) for v in real.order.values()] + [0]) + 4
    total = 3 * width
    circ = real.__dict__.get("_circ")
    if circ is None:
        circ = {t: [(_circle(*A, width), _circle(*B, width), j) for A, B, j in cs]
                for t, cs in real.triangle_chords().items()}
        real._circ = circ
    result: list[list[Crossing]] = []
    nch = len(ch.tri)
    for i in range(nch):
        cs = circ.get(ch.tri[i])
        if not cs:
            result.append([])
            continue
        a, b = ch.a[i], ch.b[i]
        if a < 3:
            hin = pg.twin[path[i - 1]] if (ch.closed or i > 0) else None
            P = _circle(a, xpos(hin, (i - 1) % m), width)
        else:
            P = _circle(a - 3, -1, width)
        if b < 3:
            Q = _circle(b, xpos(path[i], i), width)
        else:
            Q = _circle(b - 3, -1, width)
        found = []
        if P != Q:
            wrap = P > Q
            for Ai, Bi, j in cs:
                # is each end of the c chord on the arc from P to Q?
                ina = (Ai > P or Ai < Q) if wrap else (P < Ai < Q)
                inb = (Bi > P or Bi < Q) if wrap else (P < Bi < Q)
                if ina != inb:
                    X = Ai if ina else Bi
                    found.append(Crossing(i, j, _in_arc(Ai, Bi, P), (X - P) % total))
        found.sort(key=lambda c: c.along)
        result.append(found)
    return ch, result


def _is_power_of(page, x_path, c_path) -> bool:
    n, m = len(c_path), len(x_path)
    if m == 0 or m % n:
        return False
    target = CombCurve(page, tuple(c_path) * (m // n))
    return canonical_key(target) == canonical_key(CombCurve(page, tuple(x_path)))


def twist(c: CombCurve, x, sign: int = 1):
    """Image of ``x`` under the Dehn twist about ``c`` (right-handed if sign > 0)."""
    if not same_page(c.page, x.page):
        raise PageMismatch("twist curve and target live on different pages")
    pg = c.page
    real = realize(c)
    if isinstance(x, CombCurve):
        xp = cyclic_reduce(pg, x.path)
        if not xp or _is_power_of(pg, xp, real.path):
            return normalize(x)
    ch, crossings = transverse_crossings(real, x)
    cp, n = real.path, real.n
    tw = pg.twin
    out: list[int] = []
    for i, found in enumerate(crossings):
        for cr in found:
            j = cr.strand
            if cr.right_to_left == (sign > 0):
                out.extend(cp[(j + k) % n] for k in range(n))
            else:
                out.extend(tw[cp[(j - 1 - k) % n]] for k in range(n))
        if i < len(ch.path):
            out.append(ch.path[i])
    if isinstance(x, CombCurve):
        return normalize(CombCurve(pg, tuple(out)))
    (t0, k0), _, (t1, k1) = x.taut()
    return CombArc.from_corners(pg, (t0, k0), out, (t1, k1))


def geometric_intersection(a, b) -> int:
    """Minimal number of transverse intersections of a closed curve with a
    closed curve or arc (placement by the ray rule is minimal for taut input)."""
    if not same_page(a.page, b.page):
        raise PageMismatch("curves live on different pages")
    if isinstance(a, CombArc) and isinstance(b, CombCurve):
        a, b = b, a
    if not isinstance(a, CombCurve):
        raise CurveError("at least one argument must be a closed curve")
    if not normalize(a).path:
        return 0
    real = realize(a)
    if isinstance(b, CombCurve):
        bp = cyclic_reduce(b.page, b.path)
        if not bp or _is_power_of(b.page, bp, real.path):
            return 0
    _, crossings = transverse_crossings(real, b)
    return sum(len(f) for f in crossings)


def algebraic_intersection(c: CombCurve, x: CombCurve) -> int:
    """Signed count: +1 each time x (along its path) crosses c from right to left."""
    if not normalize(c).path:
        return 0
    real = realize(c)
    xp = cyclic_reduce(x.page, x.path)
    if not xp or _is_power_of(x.page, xp, real.path):
        return 0
    # orientation of c in the realization is the canonical path's
    sgn = 1
    if tuple(cyclic_reduce(c.page, c.path)) and not _same_direction(c, real):
        sgn = -1
    _, crossings = transverse_crossings(real, x)
    return sgn * sum((1 if cr.right_to_left else -1) for f in crossings for cr in f)


def _same_direction(c: CombCurve, real: Realization) -> bool:
    p = cyclic_reduce(c.page, c.path)
    return _min_rotation(p) == real.path
