"""Explicit plane tropical curves from column polynomials.

A curve is the corner locus of  P(x, y) = max_{k,b} (a_{k,b} + k x + b y).
Lattice points (k, b) are grouped into columns k; the curve is computed by a
sweep in y, exactly, over rationals.  Vertices carry their dual cells (the
argmax lattice points), so duality is read off rather than assumed.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .model import Ambient, DegreeSpec, PointConfig, frac_str, smooth_curve_layout


Point = tuple[Fraction, Fraction]


# ---------------------------------------------------------------------------
# lattice helpers


def hull2d(points):
    """Vertices of the convex hull of integer points, counter-clockwise, no collinear points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def twice_area(poly) -> int:
    """Normalized (twice Euclidean) area of a polygon given in cyclic order."""
    n = len(poly)
    if n < 3:
        return 0
    s = 0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s)


def is_collinear(points) -> bool:
    return twice_area(hull2d(points)) == 0


def primitive(v):
    g = gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g), g


# ---------------------------------------------------------------------------
# curve data


@dataclass(frozen=True)
class Edge:
    """An edge from vertex ``v0`` to vertex ``v1``; ``None`` stands for infinity.

    ``direction`` is primitive and points from v0 towards v1.  ``anchor`` is a
    point on the edge (used when both ends are at infinity).
    """

    v0: int | None
    v1: int | None
    direction: tuple[int, int]
    weight: int
    dual: tuple[tuple[int, int], tuple[int, int]]
    anchor: Point

    @property
    def bounded(self) -> bool:
        return self.v0 is not None and self.v1 is not None

    def is_horizontal(self) -> bool:
        return self.direction[1] == 0

    def is_diagonal(self) -> bool:
        return self.direction[0] == self.direction[1]

    def is_vertical(self) -> bool:
        return self.direction[0] == 0


@dataclass
class PlaneCurve:
    coeffs: dict[tuple[int, int], Fraction]
    vertices: list[Point]
    cells: list[tuple[tuple[int, int], ...]]  # argmax lattice points per vertex
    edges: list[Edge]
    spec: DegreeSpec | None = None
    marks: dict = field(default_factory=dict)

    # -- evaluation ---------------------------------------------------------

    def argmax(self, p) -> list[tuple[int, int]]:
        x, y = p
        best, arg = None, []
        for (k, b), a in self.coeffs.items():
            v = a + k * x + b * y
            if best is None or v > best:
                best, arg = v, [(k, b)]
            elif v == best:
                arg.append((k, b))
        return sorted(arg)

    def value(self, p) -> Fraction:
        x, y = p
        return max(a + k * x + b * y for (k, b), a in self.coeffs.items())

    def contains(self, p) -> bool:
        return len(self.argmax(p)) >= 2

    def support_polygon(self):
        return hull2d(self.coeffs.keys())

    # -- geometry -------------------------------------------------------------

    def edge_points(self, edge: Edge):
        a = self.vertices[edge.v0] if edge.v0 is not None else None
        b = self.vertices[edge.v1] if edge.v1 is not None else None
        return a, b

    def on_edge(self, p, edge: Edge, interior: bool = True) -> bool:
        """Exact test whether p lies on the edge (strictly inside when ``interior``)."""
        a, b = self.edge_points(edge)
        dx, dy = edge.direction
        base = a if a is not None else (b if b is not None else edge.anchor)
        if (p[0] - base[0]) * dy - (p[1] - base[1]) * dx != 0:
            return False
        t = lambda q: (q[0] - base[0]) * dx + (q[1] - base[1]) * dy  # noqa: E731
        tp = t(p)
        lo = t(a) if a is not None else None
        hi = t(b) if b is not None else None
        if interior:
            return (lo is None or tp > lo) and (hi is None or tp < hi)
        return (lo is None or tp >= lo) and (hi is None or tp <= hi)

    def edge_at(self, p) -> int | None:
        """Index of the edge having p in its relative interior."""
        for idx, e in enumerate(self.edges):
            if self.on_edge(p, e):
                return idx
        return None

    def incident(self, v: int):
        """(edge index, outgoing primitive direction) pairs at vertex v."""
        out = []
        for idx, e in enumerate(self.edges):
            if e.v0 == v:
                out.append((idx, e.direction))
            if e.v1 == v:
                out.append((idx, (-e.direction[0], -e.direction[1])))
        return out

    def balancing_defect(self, v: int):
        sx = sy = 0
        for idx, (dx, dy) in self.incident(v):
            w = self.edges[idx].weight
            sx += w * dx
            sy += w * dy
        return sx, sy

    def is_balanced(self) -> bool:
        return all(self.balancing_defect(v) == (0, 0) for v in range(len(self.vertices)))

    # -- dual subdivision -----------------------------------------------------

    def dual_cells(self):
        """Lattice polygons (counter-clockwise vertices) dual to the vertices."""
        return [tuple(hull2d(c)) for c in self.cells]

    def cell_area_sum(self) -> int:
        return sum(twice_area(c) for c in self.dual_cells())

    def newton_area(self) -> int:
        return twice_area(self.support_polygon())

    def subdivision_ok(self) -> bool:
        """Cells of positive area tile the Newton polygon, and every edge is
        dual to a side of its end cells."""
        if self.cell_area_sum() != self.newton_area():
            return False
        for e in self.edges:
            for v in (e.v0, e.v1):
                if v is not None and not set(e.dual) <= set(self.cells[v]):
                    return False
        return all(twice_area(c) > 0 for c in self.dual_cells())

    def columns_present(self) -> bool:
        """Every vertical line x = k of the polygon shows up in the subdivision."""
        ks = sorted({k for k, _ in self.coeffs})
        seen = set()
        for c in self.cells:
            seen.update(k for k, _ in c)
        return all(k in seen for k in ks)

    def cell_stats(self):
        """(normalized area, lattice points) of every cell."""
        return [(twice_area(hull2d(c)), len(hull2d(c))) for c in self.cells]

    def is_smooth(self) -> bool:
        return all(twice_area(hull2d(c)) == 1 for c in self.cells)

    # -- export ---------------------------------------------------------------

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            rec = {"weight": e.weight, "dir": list(e.direction),
                   "dual": [list(e.dual[0]), list(e.dual[1])]}
            rec["v0"] = e.v0 if e.v0 is not None else "ray"
            rec["v1"] = e.v1 if e.v1 is not None else "ray"
            if e.v0 is None and e.v1 is None:
                rec["anchor"] = [frac_str(c) for c in e.anchor]
            edges.append(rec)
        return {
            "spec": self.spec.to_json() if self.spec else None,
            "vertices": [[frac_str(x), frac_str(y)] for x, y in self.vertices],
            "edges": edges,
            "dual_cells": [[list(p) for p in c] for c in self.dual_cells()],
        }


# ---------------------------------------------------------------------------
# the sweep


class _Column:
    """Upper envelope of a column: H(y) = max_b (a_b + b y)."""

    def __init__(self, k, entries):
        self.k = k
        ents = sorted(entries)  # by b
        self.entries = ents
        hull = []
        for b, a in ents:
            # drop entries that never attain the maximum
            while hull:
                b1, a1 = hull[-1]
                if a >= a1 and b == b1:
                    hull.pop()
                    continue
                if len(hull) >= 2:
                    b0, a0 = hull[-2]
                    # b1 is redundant if its breakpoint with b0 is not below that with b
                    if (a0 - a1) * (b - b1) >= (a1 - a) * (b1 - b0):
                        hull.pop()
                        continue
                break
            if hull and hull[-1][0] == b:
                continue
            hull.append((b, a))
        self.forms = hull
        self.breaks = [(a0 - a1) / Fraction(b1 - b0)
                       for (b0, a0), (b1, a1) in zip(hull, hull[1:])]

    def form_above(self, y):
        """(b, a) active just above y (y=None means minus infinity)."""
        if y is None:
            return self.forms[0]
        return self.forms[bisect_right(self.breaks, y)]

    def form_below(self, y):
        if y is None:
            return self.forms[0]
        i = bisect_right(self.breaks, y)
        while i > 0 and self.breaks[i - 1] == y:
            i -= 1
        return self.forms[i]

    def value(self, y):
        b, a = self.form_above(y)
        return a + b * y


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])


def _sign_at(const, lin, y):
    """Sign of const + lin*t at t = y + epsilon (or minus infinity when y is None)."""
    if y is None:
        if lin != 0:
            return -1 if lin > 0 else 1
        return (const > 0) - (const < 0)
    v = const + lin * y
    if v != 0:
        return (v > 0) - (v < 0)
    return (lin > 0) - (lin < 0)


def _upper_hull(ks, forms, y):
    """Columns on the strict upper hull of (k, H_k) just above y."""
    hull = []
    for k in ks:
        while len(hull) >= 2:
            k0, k1 = hull[-2], hull[-1]
            (b0, a0), (b1, a1), (b2, a2) = forms[k0], forms[k1], forms[k]
            const = _orient((k0, a0), (k1, a1), (k, a2))
            lin = _orient((k0, b0), (k1, b1), (k, b2))
            if _sign_at(const, lin, y) >= 0:
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def _exact_hull(ks, vals):
    hull = []
    for k in ks:
        while len(hull) >= 2 and _orient((hull[-2], vals[hull[-2]]), (hull[-1], vals[hull[-1]]),
                                         (k, vals[k])) >= 0:
            hull.pop()
        hull.append(k)
    return hull


def _root(const, lin):
    return None if lin == 0 else Fraction(-const) / lin


def curve_from_coeffs(coeffs: dict, spec: DegreeSpec | None = None) -> PlaneCurve:
    """Compute the tropical curve of a polynomial given by its coefficients."""
    coeffs = {(int(k), int(b)): Fraction(a) for (k, b), a in coeffs.items()}
    bycol = {}
    for (k, b), a in coeffs.items():
        bycol.setdefault(k, []).append((b, a))
    cols = {k: _Column(k, v) for k, v in bycol.items()}
    ks = sorted(cols)
    breaks = sorted({y for c in cols.values() for y in c.breaks})

    # kinetic sweep: intervals (lo, hi, hull, forms)
    intervals = []
    pos = None
    while True:
        forms = {k: cols[k].form_above(pos) for k in ks}
        hull = _upper_hull(ks, forms, pos)
        cand = []
        nxt = bisect_right(breaks, pos) if pos is not None else 0
        nb = breaks[nxt] if nxt < len(breaks) else None
        if nb is not None:
            cand.append(nb)
        for t in range(len(hull) - 2):
            k0, k1, k2 = hull[t:t + 3]
            (b0, a0), (b1, a1), (b2, a2) = forms[k0], forms[k1], forms[k2]
            r = _root(_orient((k0, a0), (k1, a1), (k2, a2)), _orient((k0, b0), (k1, b1), (k2, b2)))
            if r is not None and (pos is None or r > pos):
                cand.append(r)
        hset = set(hull)
        for t in range(len(hull) - 1):
            k0, k2 = hull[t], hull[t + 1]
            for k in ks:
                if k0 < k < k2 and k not in hset:
                    (b0, a0), (b1, a1), (b2, a2) = forms[k0], forms[k], forms[k2]
                    r = _root(_orient((k0, a0), (k, a1), (k2, a2)),
                              _orient((k0, b0), (k, b1), (k2, b2)))
                    if r is not None and (pos is None or r > pos):
                        cand.append(r)
        hi = min(cand) if cand else None
        intervals.append((pos, hi, hull, forms))
        if hi is None:
            break
        pos = hi

    vertices: list[Point] = []
    cells = []
    vindex = {}
    is_vertex = {}

    def local_argmax(p):
        x, y = p
        tops = {k: cols[k].value(y) + k * x for k in ks}
        best = max(tops.values())
        arg = []
        for k in ks:
            if tops[k] == best:
                h = best - k * x
                arg += [(k, b) for b, a in cols[k].entries if a + b * y == h]
        return arg

    def classify(p):
        if p not in is_vertex:
            arg = local_argmax(p)
            if not is_collinear(arg):
                vindex[p] = len(vertices)
                vertices.append(p)
                cells.append(tuple(arg))
                is_vertex[p] = True
            else:
                is_vertex[p] = False
        return is_vertex[p]

    def floor_x(forms, k0, k1, y):
        (b0, a0), (b1, a1) = forms[k0], forms[k1]
        return (a0 + b0 * y - a1 - b1 * y) / Fraction(k1 - k0)

    def dual_of(forms, k0, k1):
        return ((k0, forms[k0][0]), (k1, forms[k1][0]))

    def up_dir(forms, k0, k1):
        (b0, _), (b1, _) = forms[k0], forms[k1]
        return primitive((b0 - b1, k1 - k0))

    edges: list[Edge] = []
    open_edges = {}  # dual segment -> (start vertex or None, anchor, direction, weight)
    lo0, _, hull0, forms0 = intervals[0]
    for t in range(len(hull0) - 1):
        k0, k1 = hull0[t], hull0[t + 1]
        dirn, w = up_dir(forms0, k0, k1)
        y0 = (intervals[0][1] - 1) if intervals[0][1] is not None else Fraction(0)
        open_edges[dual_of(forms0, k0, k1)] = (None, (floor_x(forms0, k0, k1, y0), y0), dirn, w)

    for idx in range(len(intervals) - 1):
        _, ye, hull_b, forms_b = intervals[idx]
        _, _, hull_a, forms_a = intervals[idx + 1]
        # exact structure at ye
        vals = {k: cols[k].value(ye) for k in ks}
        ehull = _exact_hull(ks, vals)
        for t in range(len(ehull) - 1):
            k0, k1 = ehull[t], ehull[t + 1]
            classify(((vals[k0] - vals[k1]) / Fraction(k1 - k0), ye))
        above = {dual_of(forms_a, hull_a[t], hull_a[t + 1]): (hull_a[t], hull_a[t + 1])
                 for t in range(len(hull_a) - 1)}
        for dual, (start, anchor, dirn, w) in list(open_edges.items()):
            k0, k1 = dual[0][0], dual[1][0]
            p = (floor_x(forms_b, k0, k1, ye), ye)
            if classify(p):
                edges.append(Edge(start, vindex[p], dirn, w, dual, p))
                del open_edges[dual]
            elif dual not in above:
                raise AssertionError(f"edge {dual} ends at a non-vertex point {p}")
        for dual, (k0, k1) in above.items():
            if dual in open_edges:
                continue
            p = (floor_x(forms_a, k0, k1, ye), ye)
            if not classify(p):
                raise AssertionError(f"edge {dual} starts at a non-vertex point {p}")
            dirn, w = up_dir(forms_a, k0, k1)
            open_edges[dual] = (vindex[p], p, dirn, w)
        # horizontal edges at ye
        for t, k in enumerate(ehull):
            b_lo, _ = cols[k].form_below(ye)
            b_hi, _ = cols[k].form_above(ye)
            if b_hi == b_lo:
                continue
            left = right = None
            if t > 0:
                kp = ehull[t - 1]
                left = ((vals[kp] - vals[k]) / Fraction(k - kp), ye)
            if t + 1 < len(ehull):
                kn = ehull[t + 1]
                right = ((vals[k] - vals[kn]) / Fraction(kn - k), ye)
            for q in (left, right):
                if q is not None and not classify(q):
                    raise AssertionError(f"horizontal edge ends at a non-vertex point {q}")
            anchor = left or right or (Fraction(0), ye)
            edges.append(Edge(vindex[left] if left else None, vindex[right] if right else None,
                              (1, 0), b_hi - b_lo, ((k, b_lo), (k, b_hi)), anchor))
    for dual, (start, anchor, dirn, w) in open_edges.items():
        edges.append(Edge(start, None, dirn, w, dual, anchor))

    # a ray starting at infinity is stored with its vertex first
    fixed = []
    for e in edges:
        if e.v0 is None and e.v1 is not None:
            fixed.append(Edge(e.v1, None, (-e.direction[0], -e.direction[1]), e.weight, e.dual,
                              vertices[e.v1]))
        else:
            fixed.append(e)
    fixed.sort(key=lambda e: (e.dual, e.v0 if e.v0 is not None else -1))
    return PlaneCurve(coeffs, vertices, cells, fixed, spec)


def _argmax(coeffs, p):
    x, y = p
    best, arg = None, []
    for (k, b), a in coeffs.items():
        v = a + k * x + b * y
        if best is None or v > best:
            best, arg = v, [(k, b)]
        elif v == best:
            arg.append((k, b))
    return sorted(arg)


# ---------------------------------------------------------------------------
# building curves from columns of roots


@dataclass(frozen=True)
class ColumnSpec:
    """Column k of a floor-decomposed curve: its roots (repeated for weight) and
    lowest exponent."""

    roots: tuple[Fraction, ...]
    base: int = 0


def _root_part(col: ColumnSpec, y):
    return col.base * y + sum((y - r for r in col.roots if y > r), Fraction(0))


def curve_from_columns(columns: dict[int, ColumnSpec], floor_points: dict[int, Point],
                       spec: DegreeSpec | None = None) -> PlaneCurve:
    """Floor-composed curve: column k carries the elevators with the given roots,
    and floor k (between columns k and k+1) passes through floor_points[k]."""
    ks = sorted(columns)
    top = ks[-1]
    const = {top: Fraction(0)}
    for k in reversed(ks[:-1]):
        if k not in floor_points:
            raise ValueError(f"floor {k} has no point condition")
        x, y = floor_points[k]
        const[k] = x + const[k + 1] + _root_part(columns[k + 1], y) - _root_part(columns[k], y)
    coeffs = {}
    for k in ks:
        col = columns[k]
        roots = sorted(col.roots)
        acc = const[k]
        coeffs[(k, col.base)] = acc
        for t, r in enumerate(roots, start=1):
            acc -= r
            coeffs[(k, col.base + t)] = acc
    return curve_from_coeffs(coeffs, spec)


def column_heights(spec: DegreeSpec) -> dict[int, int]:
    """Height of every column of the Newton polygon of a plane curve spec."""
    if spec.ambient is Ambient.P2:
        return {k: spec.d - k for k in range(spec.d + 1)}
    if spec.ambient is Ambient.P1P1:
        return {k: spec.e for k in range(spec.d + 1)}
    raise ValueError("plane curve spec expected")


def default_points(spec: DegreeSpec, n: int | None = None) -> PointConfig:
    return PointConfig.stretched(n if n is not None else spec.smooth_point_count(), 2)


def compose_smooth(spec: DegreeSpec, points: PointConfig | None = None,
                   labels: list[int] | None = None) -> PlaneCurve:
    """The smooth floor-decomposed curve through the full stretched allocation.

    ``labels`` optionally maps the local point order onto other Q-indices.
    """
    lay = smooth_curve_layout(spec)
    if points is None:
        points = default_points(spec)
    q = (lambda t: points[labels[t - 1]]) if labels is not None else (lambda t: points[t])
    d = spec.d
    columns, floors = {}, {}
    for k in column_heights(spec):
        i = d - k
        roots = tuple(q(t)[1] for t in lay.indices(i)) if i in lay.blocks else ()
        columns[k] = ColumnSpec(roots)
    for i, t in lay.floor_points.items():
        floors[d - i] = tuple(q(t)[:2])
    curve = curve_from_columns(columns, floors, spec)
    curve.marks = {"points": [tuple(q(t)[:2]) for t in range(1, spec.smooth_point_count() + 1)]}
    return curve


def incidence_check(curve: PlaneCurve, points) -> bool:
    """True iff every given point lies on the curve (exact)."""
    return all(curve.contains(tuple(p[:2])) for p in points)


# ---------------------------------------------------------------------------
# features of smooth curves


@dataclass(frozen=True)
class FeatureTable:
    horizontal_bounded: tuple[tuple[int, int], ...]  # (k, l) of the dual vertical edge
    diagonal_bounded: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    vertical_bounded: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    free_vertices: tuple[tuple[tuple[int, int], ...], ...]  # cells not touching a diagonal edge
    ends: tuple[tuple[tuple[int, int], int], ...]  # (direction, count)
    left_ends: tuple[tuple[int, int], ...]  # (0, l) placements
    right_ends: tuple[tuple[int, int], ...]  # (k_max, l) placements

    def counts(self) -> dict:
        return {
            "horizontal_bounded": len(self.horizontal_bounded),
            "diagonal_bounded": len(self.diagonal_bounded),
            "vertical_bounded": len(self.vertical_bounded),
            "free_vertices": len(self.free_vertices),
            "ends": {f"{d[0]},{d[1]}": c for d, c in self.ends},
        }


def features_of(curve: PlaneCurve) -> FeatureTable:
    hb, db, vb = [], [], []
    ends = {}
    left, right = [], []
    kmax = max(k for k, _ in curve.coeffs)
    diag_touch = set()
    for e in curve.edges:
        if e.is_diagonal():
            for v in (e.v0, e.v1):
                if v is not None:
                    diag_touch.add(v)
        if e.bounded:
            if e.is_horizontal():
                (k, b0), (_, b1) = e.dual
                hb.append((k, min(b0, b1)))
            elif e.is_diagonal():
                db.append(e.dual)
            elif e.is_vertical():
                vb.append(e.dual)
        else:
            key = (e.direction, e.weight)
            ends[key] = ends.get(key, 0) + 1
            if e.is_horizontal():
                (k, b0), (_, b1) = e.dual
                if e.direction[0] < 0:
                    left.append((k, min(b0, b1)))
                else:
                    right.append((kmax, min(b0, b1)))
    free = [tuple(hull2d(curve.cells[v])) for v in range(len(curve.vertices)) if v not in diag_touch]
    return FeatureTable(
        tuple(sorted(hb)), tuple(sorted(db)), tuple(sorted(vb)), tuple(sorted(free)),
        tuple(sorted(((d, c) for (d, w), c in ends.items() if w == 1))),
        tuple(sorted(left)), tuple(sorted(right)))


@lru_cache(maxsize=None)
def smooth_features(spec: DegreeSpec) -> FeatureTable:
    """Feature table of the smooth curve through a stretched full allocation."""
    return features_of(compose_smooth(spec))


def smooth_features_combinatorial(spec: DegreeSpec) -> FeatureTable:
    """The same table read off the known column structure (no geometry)."""
    if spec.ambient is Ambient.P2:
        m = spec.d
        hb = [(k, l) for k in range(1, m) for l in range(m - k)]
        db = [((k, 1), (k + 1, 0)) for k in range(m - 1)]
        free = []
        for k in range(m - 1):
            free += [tuple(hull2d([(k, a), (k, a + 1), (k + 1, 0)])) for a in range(2, m - k)]
            free += [tuple(hull2d([(k, m - k), (k + 1, b), (k + 1, b + 1)])) for b in range(m - k - 2)]
        ends = {(-1, 0): m, (0, -1): m, (1, 1): m}
        left = [(0, l) for l in range(m)]
        right = []
    else:
        e, f = spec.params
        hb = [(k, l) for k in range(1, e) for l in range(f)]
        db = sorted({((k, 1), (k + 1, 0)) for k in range(e)} | {((k, f), (k + 1, f - 1)) for k in range(e)})
        free = []
        for k in range(e):
            free += [tuple(hull2d([(k, a), (k, a + 1), (k + 1, 0)])) for a in range(2, f)]
            free += [tuple(hull2d([(k, f), (k + 1, b), (k + 1, b + 1)])) for b in range(f - 2)]
        ends = {(-1, 0): f, (1, 0): f, (0, -1): e, (0, 1): e}
        left = [(0, l) for l in range(f)]
        right = [(e, l) for l in range(f)]
    return FeatureTable(tuple(sorted(hb)), tuple(sorted(db)), (), tuple(sorted(free)),
                        tuple(sorted(ends.items())), tuple(left), tuple(right))


# ---------------------------------------------------------------------------
# node germs


GERM_KINDS = ("parallelogram_a", "parallelogram_b", "weight2_midpoint", "weight2_end",
              "left_string", "right_string")


@dataclass(frozen=True)
class NodeGerm:
    """A node germ carried by floor curve C_host.

    ``placement`` is the lattice position (k, l) read by the multiplicity
    tables.  For weight-2 ends ``detail`` is the end direction and ``side``
    says which boundary of the polygon it sits on; for strings ``detail`` is
    the kind of feature targeted on the neighbouring curve and ``target`` its
    dual cell.  Type-1 germs keep the key of the host curve plan.
    """

    host: int
    kind: str
    placement: tuple[int, int]
    detail: str = ""
    side: str = ""
    target: tuple = ()
    plan_key: tuple | None = None

    def key(self):
        return (self.host, GERM_KINDS.index(self.kind), self.detail, self.side,
                self.placement, self.target, self.plan_key or ())

    def to_json(self) -> dict:
        out = {"index": self.host, "kind": self.kind, "placement": list(self.placement)}
        if self.detail:
            out["detail"] = self.detail
        if self.side:
            out["side"] = self.side
        if self.target:
            out["alignment_target"] = [list(p) for p in self.target]
        if self.plan_key is not None:
            out["curve_plan"] = list(self.plan_key)
        return out


def host_spec(spec: DegreeSpec, i: int) -> DegreeSpec:
    """Degree of the floor curve C_i of a surface spec."""
    if spec.ambient is Ambient.P3:
        return DegreeSpec.p2(i)
    if spec.ambient is Ambient.P1XP2:
        return DegreeSpec.p2(spec.e)
    if spec.ambient is Ambient.P1P1P1:
        return DegreeSpec.p1p1(spec.e, spec.f)
    raise ValueError("surface spec expected")


def boundary_flags(spec: DegreeSpec, i: int) -> tuple[bool, bool]:
    """(is bottom index, is top index)."""
    lo = 1 if spec.ambient is Ambient.P3 else 0
    return i == lo, i == spec.d


def type1_germs(spec: DegreeSpec, i: int) -> list[NodeGerm]:
    from .curve_floorplans import enumerate_curve_floorplans

    host = host_spec(spec, i)
    out = []
    for plan in enumerate_curve_floorplans(host):
        kind, pl = plan.placement()
        out.append(NodeGerm(i, kind, pl, plan_key=plan.key()))
    return out


def weight2_end_germs(spec: DegreeSpec, i: int) -> list[NodeGerm]:
    bottom, top = boundary_flags(spec, i)
    out = []
    if spec.ambient in (Ambient.P3, Ambient.P1XP2):
        m = host_spec(spec, i).d
        if not top:
            out += [NodeGerm(i, "weight2_end", (0, s), "horizontal", "left") for s in range(m - 1)]
        if spec.ambient is Ambient.P3 or not bottom:
            out += [NodeGerm(i, "weight2_end", (k, m - k), "diagonal", "top") for k in range(1, m)]
    else:
        e, f = spec.e, spec.f
        if not top:
            out += [NodeGerm(i, "weight2_end", (0, s), "horizontal", "left") for s in range(f - 1)]
            out += [NodeGerm(i, "weight2_end", (k, 0), "vertical", "down") for k in range(1, e)]
        if not bottom:
            out += [NodeGerm(i, "weight2_end", (e, s), "horizontal", "right") for s in range(f - 1)]
            out += [NodeGerm(i, "weight2_end", (k, f), "vertical", "up") for k in range(1, e)]
    return out


def string_germs(spec: DegreeSpec, i: int) -> list[NodeGerm]:
    bottom, top = boundary_flags(spec, i)
    out = []
    if not top:
        feats = smooth_features_combinatorial(host_spec(spec, i + 1))
        for k, l in feats.horizontal_bounded:
            out.append(NodeGerm(i, "left_string", (k, l), "horizontal_edge",
                                target=((k, l), (k, l + 1))))
        if spec.ambient is Ambient.P1P1P1:
            for k, l in feats.right_ends:
                out.append(NodeGerm(i, "left_string", (k, l), "right_end",
                                    target=((k, l), (k, l + 1))))
    if not bottom:
        feats = smooth_features_combinatorial(host_spec(spec, i - 1))
        if spec.ambient is Ambient.P1P1P1:
            for k, l in feats.horizontal_bounded:
                out.append(NodeGerm(i, "right_string", (k, l), "horizontal_edge",
                                    target=((k, l), (k, l + 1))))
            for k, l in feats.left_ends:
                out.append(NodeGerm(i, "right_string", (k, l), "left_end",
                                    target=((k, l), (k, l + 1))))
        else:
            for a, b in feats.diagonal_bounded:
                out.append(NodeGerm(i, "right_string", (a[0], 0), "diagonal_edge", target=(a, b)))
            for cell in feats.free_vertices:
                out.append(NodeGerm(i, "right_string", cell[0], "vertex", target=tuple(cell)))
    return out


def enumerate_node_germs(spec: DegreeSpec, i: int) -> list[NodeGerm]:
    """Every node germ floor curve C_i of a surface floor plan can carry."""
    bottom, top = boundary_flags(spec, i)
    out = []
    if not top and (spec.ambient is Ambient.P3 or not bottom):
        out += type1_germs(spec, i)
    out += weight2_end_germs(spec, i)
    out += string_germs(spec, i)
    out.sort(key=NodeGerm.key)
    return out
