"""
Polygon models of the pages and a route language for curves on them.

A route lists the polygon sides a curve leaves through, in order; the side
it enters next is the glued partner of the side it just left.  Inside a
polygon (a disk) the path between two sides is unique up to homotopy, so a
route pins down a curve exactly.  Arcs start and end at polygon corners,
named by the side that starts there.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..curves import CombArc, CombCurve, normalize
from ..surface import Polygon, PolygonSpec, SideRef, build_surface


class RouteError(ValueError):
    pass


class PolygonModel:
    def __init__(self, polygons: Sequence[tuple[str, Sequence[str]]],
                 gluings: Sequence[tuple[tuple[str, str], tuple[str, str]]]):
        self.polygons = [(pid, list(sides)) for pid, sides in polygons]
        self.side_idx = {}
        for pid, sides in self.polygons:
            if len(set(sides)) != len(sides):
                raise RouteError(f"duplicate side labels in polygon {pid}")
            for k, s in enumerate(sides):
                self.side_idx[(pid, s)] = k
        idents = []
        for a, b in gluings:
            idents.append((SideRef(a[0], self.side_idx[a]), SideRef(b[0], self.side_idx[b]), "reversed"))
        self.spec = PolygonSpec(tuple(Polygon(p, tuple(s)) for p, s in self.polygons), tuple(idents))
        self.page, self.layout = build_surface(self.spec, with_layout=True)
        self.pindex = self.spec.polygon_index()
        self.partner = {}
        for a, b in gluings:
            self.partner[a] = b
            self.partner[b] = a

    # -- lookup ---------------------------------------------------------------

    def n_sides(self, pid: str) -> int:
        return len(self.polygons[self.pindex[pid]][1])

    def fan(self, pid: str) -> list[int]:
        return self.layout.fan[self.pindex[pid]]

    def side_half(self, pid: str, label: str) -> int:
        return self.layout.side_half[(self.pindex[pid], self.side_idx[(pid, label)])]

    def _side_tri(self, pid: str, s: int) -> int:
        n = self.n_sides(pid)
        return 0 if s == 0 else (n - 3 if s == n - 1 else s - 1)

    def corner(self, pid: str, label: str) -> tuple[int, int]:
        """(triangle, index) of the corner where side ``label`` starts."""
        c = self.side_idx[(pid, label)]
        n = self.n_sides(pid)
        f = self.fan(pid)
        if c == 0:
            return f[0], 0
        if c == n - 1:
            return f[n - 3], 2
        return f[c - 1], 1

    def _inside(self, pid: str, j0: int, j1: int) -> list[int]:
        """Diagonals crossed from fan triangle j0 to fan triangle j1."""
        f = self.fan(pid)
        if j0 <= j1:
            return [3 * f[j] + 2 for j in range(j0, j1)]
        return [3 * f[j] for j in range(j0, j1, -1)]

    def _leg(self, pid: str, j0: int, exit_label: str) -> list[int]:
        s = self.side_idx[(pid, exit_label)]
        return self._inside(pid, j0, self._side_tri(pid, s)) + [self.side_half(pid, exit_label)]

    # -- curves ---------------------------------------------------------------

    def route(self, exits: Sequence[tuple[str, str]]) -> list[int]:
        exits = [tuple(e) for e in exits]
        path = []
        for k, (pid, lab) in enumerate(exits):
            prev = exits[k - 1]
            if prev not in self.partner:
                raise RouteError(f"side {prev} is a boundary side")
            epid, elab = self.partner[prev]
            if epid != pid:
                raise RouteError(f"route leaves {prev} into {epid}, not {pid}")
            j0 = self._side_tri(pid, self.side_idx[(pid, elab)])
            path += self._leg(pid, j0, lab)
        return path

    def curve(self, exits: Sequence[tuple[str, str]]) -> CombCurve:
        return normalize(CombCurve(self.page, tuple(self.route(exits))))

    def arc(self, start: tuple[str, str], exits: Sequence[tuple[str, str]],
            end: tuple[str, str]) -> CombArc:
        """Arc from the corner starting side ``start`` through ``exits``."""
        pid, lab = start
        t0, k0 = self.corner(pid, lab)
        j = self.fan(pid).index(t0)
        path = []
        cur_pid = pid
        for (p, l) in exits:
            if p != cur_pid:
                raise RouteError(f"arc route expected polygon {cur_pid}, got {p}")
            path += self._leg(p, j, l)
            cur_pid, elab = self.partner[(p, l)]
            j = self._side_tri(cur_pid, self.side_idx[(cur_pid, elab)])
        epid, elab = end
        if epid != cur_pid:
            raise RouteError("arc ends in the wrong polygon")
        t1, k1 = self.corner(epid, elab)
        path += self._inside(epid, j, self.fan(epid).index(t1))
        return normalize(CombArc.from_corners(self.page, (t0, k0), path, (t1, k1)))

    def boundary_component_of(self, pid: str, label: str) -> int:
        h = self.side_half(pid, label)
        for i, cyc in enumerate(self.page.boundary_components()):
            if h in cyc:
                return i
        raise RouteError(f"side {(pid, label)} is not on the boundary")


# ----------------------------------------------------------------------------
# Rectangles with subdivided top and bottom edges
# ----------------------------------------------------------------------------

def strip_polygon(width, marks: Sequence[tuple[str, Fraction]]) -> list[str]:
    """Sides of [0, width] x [-1, 1], counterclockwise from (0, -1).

    ``marks`` are interval centres: the bottom edge carries sides '-name'
    and the top edge '+name', separated by gaps.  Left and right are 'L'
    and 'R'.
    """
    order = sorted(marks, key=lambda m: m[1])
    bottom, top = ["b0"], ["t0"]
    for k, (name, _) in enumerate(order, 1):
        bottom += [f"-{name}", f"b{k}"]
        top += [f"+{name}", f"t{k}"]
    return bottom + ["R"] + top[::-1] + ["L"]
