"""
Oriented triangulated surfaces with boundary, built from polygon gluings.

Conventions
-----------
A triangle ``t`` has vertices ``(v0, v1, v2)`` in counterclockwise order.
Side ``i`` of ``t`` runs from ``v_i`` to ``v_{i+1}``; its half-edge id is
``3*t + i``.  Two sides glued together traverse the shared edge in opposite
directions, which is what makes the orientation coherent.  Every vertex lies
on the boundary, so the dual graph (triangles joined across interior edges)
is a spine of the surface.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class SurfaceError(ValueError):
    pass


class NonOrientableGluing(SurfaceError):
    pass


class ClosedSurface(SurfaceError):
    pass


class Disconnected(SurfaceError):
    pass


class InvalidSpec(SurfaceError):
    pass


# ----------------------------------------------------------------------------
# Polygon specifications
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SideRef:
    polygon: str
    index: int


@dataclass(frozen=True)
class Polygon:
    id: str
    sides: tuple[str, ...]


@dataclass(frozen=True)
class PolygonSpec:
    """Polygons listed counterclockwise plus pairwise side identifications.

    An identification ``(a, b, "reversed")`` glues the start of side ``a`` to
    the end of side ``b``; this is the orientation-compatible gluing (in a
    planar picture it is a translation or rotation).  ``"same"`` glues start
    to start, which reverses orientation and is rejected.
    """

    polygons: tuple[Polygon, ...]
    identifications: tuple[tuple[SideRef, SideRef, str], ...] = ()

    @classmethod
    def from_json(cls, data) -> "PolygonSpec":
        if isinstance(data, str):
            data = json.loads(data)
        polys = tuple(Polygon(str(p["id"]), tuple(str(s) for s in p["sides"]))
                      for p in data["polygons"])
        idents = []
        for a, b, flag in data.get("identifications", []):
            idents.append((SideRef(str(a["polygon"]), int(a["index"])),
                           SideRef(str(b["polygon"]), int(b["index"])), str(flag)))
        return cls(polys, tuple(idents))

    def to_json(self) -> dict:
        return {
            "polygons": [{"id": p.id, "sides": list(p.sides)} for p in self.polygons],
            "identifications": [
                [{"polygon": a.polygon, "index": a.index},
                 {"polygon": b.polygon, "index": b.index}, flag]
                for a, b, flag in self.identifications
            ],
        }

    def polygon_index(self) -> dict[str, int]:
        return {p.id: k for k, p in enumerate(self.polygons)}

    def partner_map(self) -> dict[tuple[int, int], tuple[int, int]]:
        """Validated map from side occurrence to its glued partner."""
        index = self.polygon_index()
        if len(index) != len(self.polygons):
            raise InvalidSpec("duplicate polygon ids")
        for p in self.polygons:
            if len(p.sides) < 3:
                raise InvalidSpec(f"polygon {p.id!r} has fewer than 3 sides")
        partner: dict[tuple[int, int], tuple[int, int]] = {}
        for a, b, flag in self.identifications:
            if flag not in ("same", "reversed"):
                raise InvalidSpec(f"unknown direction flag {flag!r}")
            occ = []
            for ref in (a, b):
                if ref.polygon not in index:
                    raise InvalidSpec(f"unknown polygon {ref.polygon!r}")
                k = index[ref.polygon]
                if not 0 <= ref.index < len(self.polygons[k].sides):
                    raise InvalidSpec(f"side index out of range: {ref}")
                occ.append((k, ref.index))
            if occ[0] == occ[1]:
                raise InvalidSpec(f"side glued to itself: {a}")
            if flag == "same":
                raise NonOrientableGluing(
                    f"gluing {a} to {b} start-to-start reverses orientation")
            for o in occ:
                if o in partner:
                    raise InvalidSpec(f"side used in two identifications: {o}")
            partner[occ[0]] = occ[1]
            partner[occ[1]] = occ[0]
        return partner


# ----------------------------------------------------------------------------
# Triangulations
# ----------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass(frozen=True)
class SurfaceClass:
    genus: int
    n_boundary: int
    euler: int

    def __post_init__(self):
        if self.euler != 2 - 2 * self.genus - self.n_boundary:
            raise ValueError("inconsistent surface class")

    def __str__(self):
        return f"Sigma_{{{self.genus},{self.n_boundary}}} (chi={self.euler})"


@dataclass(frozen=True)
class Corner:
    triangle: int
    index: int


class Triangulation:
    """A coherently oriented triangulation with all vertices on the boundary.

    Instances are immutable after construction.  ``twin[h]`` is the glued
    half-edge of ``h`` or ``-1`` when ``h`` is a boundary side.
    """

    def __init__(self, triangles: Sequence[tuple[int, int, int]], twin: Sequence[int]):
        self.triangles = tuple(tuple(t) for t in triangles)
        self.twin = tuple(twin)
        nt = len(self.triangles)
        if len(self.twin) != 3 * nt:
            raise SurfaceError("twin table has the wrong length")
        self._validate_gluing()
        self.n_vertices = 1 + max(v for t in self.triangles for v in t)

        # Edges: one per interior pair, one per boundary side.  Numbered by
        # their smallest half-edge id so the numbering is canonical.
        edge_of = [-1] * (3 * nt)
        edges = []
        for h in range(3 * nt):
            if edge_of[h] >= 0:
                continue
            k = len(edges)
            edge_of[h] = k
            o = self.twin[h]
            if o >= 0:
                edge_of[o] = k
            edges.append((h, o))
        self.edge_of = tuple(edge_of)
        self.edges = tuple(edges)
        self.interior_edges = tuple(k for k, (h, o) in enumerate(edges) if o >= 0)

        self._build_vertex_data()
        self._check_connected()

    # -- basic accessors ---------------------------------------------------

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @staticmethod
    def tri_of(h: int) -> int:
        return h // 3

    @staticmethod
    def side_of(h: int) -> int:
        return h % 3

    def tail(self, h: int) -> int:
        return self.triangles[h // 3][h % 3]

    def head(self, h: int) -> int:
        return self.triangles[h // 3][(h % 3 + 1) % 3]

    def is_boundary_half(self, h: int) -> bool:
        return self.twin[h] < 0

    def edge_endpoints(self, k: int) -> tuple[int, int]:
        h = self.edges[k][0]
        return self.tail(h), self.head(h)

    # -- construction helpers ---------------------------------------------

    def _validate_gluing(self):
        for h, o in enumerate(self.twin):
            if o < 0:
                continue
            if o == h or self.twin[o] != h:
                raise SurfaceError(f"twin table is not an involution at {h}")
            # coherent orientation: glued sides run in opposite directions
            if (self.triangles[h // 3][h % 3] != self.triangles[o // 3][(o % 3 + 1) % 3]
                    or self.triangles[h // 3][(h % 3 + 1) % 3] != self.triangles[o // 3][o % 3]):
                raise NonOrientableGluing(f"half-edges {h} and {o} are not oppositely oriented")

    def _build_vertex_data(self):
        nv = self.n_vertices
        out_half = [-1] * nv
        in_half = [-1] * nv
        for h, o in enumerate(self.twin):
            if o < 0:
                a, b = self.tail(h), self.head(h)
                if out_half[a] >= 0 or in_half[b] >= 0:
                    raise SurfaceError(f"vertex {a if out_half[a] >= 0 else b} is not a manifold point")
                out_half[a] = h
                in_half[b] = h
        for v in range(nv):
            if out_half[v] < 0:
                raise SurfaceError(f"vertex {v} is not on the boundary")
        self.out_half = tuple(out_half)
        self.in_half = tuple(in_half)

        # Fans: corners around v counterclockwise, starting from the corner
        # that carries the outgoing boundary side.  fan_cross[v][i] is the
        # half-edge crossed to move from corner i to corner i+1.
        fans = []
        fan_cross = []
        corner_pos = {}
        seen = 0
        for v in range(nv):
            h = out_half[v]
            t, k = h // 3, h % 3
            corners = [Corner(t, k)]
            crosses = []
            while True:
                prev = 3 * t + (k - 1) % 3          # side ending at v
                o = self.twin[prev]
                if o < 0:
                    if prev != in_half[v]:
                        raise SurfaceError(f"fan of vertex {v} is inconsistent")
                    break
                crosses.append(prev)
                t, k = o // 3, o % 3                 # twin starts at v
                corners.append(Corner(t, k))
                if len(corners) > 3 * self.n_triangles:
                    raise SurfaceError(f"vertex {v} is interior")
            for i, c in enumerate(corners):
                corner_pos[(c.triangle, c.index)] = (v, i)
            seen += len(corners)
            fans.append(tuple(corners))
            fan_cross.append(tuple(crosses))
        if seen != 3 * self.n_triangles:
            raise SurfaceError("some corners are not on a boundary fan (interior vertex)")
        self.fans = tuple(fans)
        self.fan_cross = tuple(fan_cross)
        self.corner_pos = corner_pos

    def _check_connected(self):
        nt = self.n_triangles
        if nt == 0:
            raise SurfaceError("empty triangulation")
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for i in range(3):
                o = self.twin[3 * t + i]
                if o >= 0 and o // 3 not in seen:
                    seen.add(o // 3)
                    stack.append(o // 3)
        if len(seen) != nt:
            raise Disconnected("triangulation is disconnected")

    # -- global data ---------------------------------------------------------

    def boundary_components(self) -> tuple[tuple[int, ...], ...]:
        """Boundary cycles as tuples of boundary half-edges, canonically ordered."""
        seen = set()
        comps = []
        for h in range(3 * self.n_triangles):
            if self.twin[h] >= 0 or h in seen:
                continue
            cyc = []
            x = h
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.out_half[self.head(x)]
            comps.append(tuple(cyc))
        return tuple(comps)

    def vertex_component(self) -> tuple[int, ...]:
        comp = [0] * self.n_vertices
        for ci, cyc in enumerate(self.boundary_components()):
            for h in cyc:
                comp[self.tail(h)] = ci
        return tuple(comp)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def classify(self) -> SurfaceClass:
        chi = self.euler_characteristic()
        b = len(self.boundary_components())
        twice_genus = 2 - chi - b
        if twice_genus < 0 or twice_genus % 2:
            raise SurfaceError("impossible Euler characteristic / boundary count")
        return SurfaceClass(twice_genus // 2, b, chi)

    def to_json(self) -> dict:
        return {
            "triangles": [list(t) for t in self.triangles],
            "twin": list(self.twin),
            "edges": [[h, o] for h, o in self.edges],
            "vertex_component": list(self.vertex_component()),
        }

    @classmethod
    def from_json(cls, data) -> "Triangulation":
        if isinstance(data, str):
            data = json.loads(data)
        return cls([tuple(t) for t in data["triangles"]], data["twin"])

    @property
    def hash(self) -> str:
        h = getattr(self, "_hash", None)
        if h is None:
            blob = json.dumps([self.triangles, self.twin], separators=(",", ":"))
            h = hashlib.sha256(blob.encode()).hexdigest()[:16]
            self._hash = h
        return h

    def __eq__(self, other):
        return (isinstance(other, Triangulation) and self.triangles == other.triangles
                and self.twin == other.twin)

    def __hash__(self):
        return hash((self.triangles, self.twin))

    def __repr__(self):
        c = self.classify()
        return (f"Triangulation(genus={c.genus}, boundary={c.n_boundary}, "
                f"triangles={self.n_triangles}, hash={self.hash})")


# ----------------------------------------------------------------------------
# build_surface
# ----------------------------------------------------------------------------

@dataclass
class PolygonLayout:
    """Where each polygon side and corner ended up in the triangulation."""

    side_half: dict[tuple[int, int], int] = field(default_factory=dict)
    fan: dict[int, list[int]] = field(default_factory=dict)   # polygon -> triangle ids


def _fan_side(n: int, s: int) -> tuple[int, int]:
    """(fan triangle index, side) holding polygon side s of an n-gon."""
    if s == 0:
        return 0, 0
    if s == n - 1:
        return n - 3, 2
    return s - 1, 1


def build_surface(spec: PolygonSpec, *, with_layout: bool = False):
    """Glue the polygons of ``spec`` and return a Triangulation.

    Each polygon is fanned from its first corner.  If the gluing leaves
    vertices in the interior, they are removed by contracting the
    lowest-index edge joining them to another vertex.
    """
    partner = spec.partner_map()
    polys = spec.polygons
    if all((k, s) in partner for k, p in enumerate(polys) for s in range(len(p.sides))):
        raise ClosedSurface("no boundary side remains")

    # Corners get provisional ids; union-find identifies them across gluings.
    corner_id = {}
    for k, p in enumerate(polys):
        for c in range(len(p.sides)):
            corner_id[(k, c)] = len(corner_id)
    uf = _UnionFind(len(corner_id))
    for (k, s), (k2, s2) in partner.items():
        n, n2 = len(polys[k].sides), len(polys[k2].sides)
        uf.union(corner_id[(k, s)], corner_id[(k2, (s2 + 1) % n2)])
        uf.union(corner_id[(k, (s + 1) % n)], corner_id[(k2, s2)])

    triangles = []
    layout = PolygonLayout()
    for k, p in enumerate(polys):
        n = len(p.sides)
        ids = []
        for j in range(1, n - 1):
            ids.append(len(triangles))
            triangles.append((corner_id[(k, 0)], corner_id[(k, j)], corner_id[(k, j + 1)]))
        layout.fan[k] = ids
        for s in range(n):
            j, side = _fan_side(n, s)
            layout.side_half[(k, s)] = 3 * ids[j] + side

    twin = [-1] * (3 * len(triangles))
    for k, p in enumerate(polys):
        ids = layout.fan[k]
        for j in range(len(ids) - 1):
            a, b = 3 * ids[j] + 2, 3 * ids[j + 1]
            twin[a], twin[b] = b, a
    for (k, s), (k2, s2) in partner.items():
        twin[layout.side_half[(k, s)]] = layout.side_half[(k2, s2)]

    # Vertex classes from union-find, then detect the interior ones.
    roots = [[uf.find(v) for v in t] for t in triangles]
    triangles, twin, contracted = _eliminate_interior_vertices(roots, twin)
    tri = _relabel(triangles, twin)
    if with_layout:
        if contracted:
            raise SurfaceError("polygon layout is unavailable after edge contraction")
        return tri, layout
    return tri


def _relabel(triangles, twin) -> Triangulation:
    order = {}
    for t in triangles:
        for v in t:
            if v not in order:
                order[v] = len(order)
    return Triangulation([tuple(order[v] for v in t) for t in triangles], twin)


def _boundary_vertices(triangles, twin):
    bd = set()
    for h, o in enumerate(twin):
        if o < 0:
            t = triangles[h // 3]
            bd.add(t[h % 3])
            bd.add(t[(h % 3 + 1) % 3])
    return bd


def _eliminate_interior_vertices(triangles, twin):
    triangles = [list(t) for t in triangles]
    twin = list(twin)
    contracted = False
    while True:
        verts = {v for t in triangles for v in t}
        bd = _boundary_vertices(triangles, twin)
        interior = sorted(verts - bd)
        if not interior:
            return [tuple(t) for t in triangles], twin, contracted
        v = interior[0]
        # lowest-index edge (by smallest half-edge id) from v to another vertex
        target = None
        for h in range(len(twin)):
            t = triangles[h // 3]
            a, b = t[h % 3], t[(h % 3 + 1) % 3]
            if (a == v) != (b == v):
                target = h
                break
        if target is None:
            raise SurfaceError(f"interior vertex {v} cannot be contracted")
        triangles, twin = _contract(triangles, twin, target, v)
        contracted = True


def _contract(triangles, twin, h, v):
    """Contract the edge of half-edge h, merging vertex v into its other end."""
    t = triangles[h // 3]
    a, b = t[h % 3], t[(h % 3 + 1) % 3]
    w = b if a == v else a
    o = twin[h]
    if o < 0:
        raise SurfaceError("cannot contract a boundary edge at an interior vertex")
    dead = {h // 3, o // 3}
    if len(dead) != 2:
        raise SurfaceError("degenerate contraction")
    # In each dead triangle, the two other sides become one edge.
    for x in (h, o):
        tt = x // 3
        s1, s2 = 3 * tt + (x % 3 + 1) % 3, 3 * tt + (x % 3 + 2) % 3
        p1, p2 = twin[s1], twin[s2]
        if p1 >= 0 and p1 // 3 in dead or p2 >= 0 and p2 // 3 in dead:
            raise SurfaceError("degenerate contraction (link condition fails)")
        if p1 >= 0:
            twin[p1] = p2
        if p2 >= 0:
            twin[p2] = p1
    keep = [k for k in range(len(triangles)) if k not in dead]
    newidx = {k: i for i, k in enumerate(keep)}
    new_tris = [[w if x == v else x for x in triangles[k]] for k in keep]
    new_twin = [-1] * (3 * len(keep))
    for k in keep:
        for i in range(3):
            p = twin[3 * k + i]
            new_twin[3 * newidx[k] + i] = -1 if p < 0 else 3 * newidx[p // 3] + p % 3
    return new_tris, new_twin


def classify(t: Triangulation) -> SurfaceClass:
    return t.classify()


def euler_characteristic(t: Triangulation) -> int:
    return t.euler_characteristic()


# ----------------------------------------------------------------------------
# Small constructors used by tests and paperlib
# ----------------------------------------------------------------------------

def polygon_spec(polygons: Iterable[tuple[str, Sequence[str]]],
                 identifications: Iterable[tuple[tuple[str, int], tuple[str, int]]] = ()) -> PolygonSpec:
    """Shorthand: all identifications are orientation-compatible."""
    polys = tuple(Polygon(pid, tuple(sides)) for pid, sides in polygons)
    idents = tuple((SideRef(*a), SideRef(*b), "reversed") for a, b in identifications)
    return PolygonSpec(polys, idents)
