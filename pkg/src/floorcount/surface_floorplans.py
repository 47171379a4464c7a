"""delta-nodal floor plans of surfaces in P3, P1xP2 and P1xP1xP1.

A plan is a choice of separated germ indices i_1 < ... < i_delta and one node
germ per index; every other floor curve is the smooth curve through its points.
Surfaces are composed as  F(x, y, z) = max_a (a x + s_a + G_a(y, z)),  where
slice a of the Newton polytope holds floor curve C_{d-a}.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .model import (Ambient, DegreeSpec, PointConfig, SignVector, check_indices, curve_layout,
                    index_range, smooth_curve_layout, special_theta, surface_curve_labels,
                    surface_layout)
from .plane_curves import (ColumnSpec, NodeGerm, PlaneCurve, column_heights, curve_from_columns,
                           enumerate_node_germs, host_spec, hull2d, twice_area)


class RealPreconditionError(ValueError):
    """A real count was requested outside the range its table covers."""


# ---------------------------------------------------------------------------
# plans


@dataclass(frozen=True)
class SurfaceFloorPlan:
    spec: DegreeSpec
    delta: int
    indices: tuple[int, ...]
    germs: tuple[NodeGerm, ...]

    def key(self):
        return (self.indices, tuple(g.key() for g in self.germs))

    def germ_at(self, i: int) -> NodeGerm | None:
        for g in self.germs:
            if g.host == i:
                return g
        return None

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "delta": self.delta, "indices": list(self.indices),
                "germs": [g.to_json() for g in self.germs]}


def validity_range_ok(spec: DegreeSpec, delta: int) -> bool:
    """Whether delta lies in the range the asymptotic statements cover."""
    if spec.ambient is Ambient.P3:
        return 0 <= 2 * delta <= spec.d
    if spec.ambient is Ambient.P1XP2:
        return 0 <= 2 * delta <= min(spec.d, spec.e)
    return 0 <= 2 * delta < min(spec.params) or delta == 0


def index_tuples(spec: DegreeSpec, delta: int):
    """All germ index tuples with consecutive gaps of at least 2, increasing."""
    lo, hi = index_range(spec)
    if delta < 0:
        raise ValueError("delta must be nonnegative")

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, hi + 1):
            for rest in rec(i + 2, left - 1):
                yield (i,) + rest

    yield from rec(lo, delta)


@lru_cache(maxsize=None)
def germs_at(spec: DegreeSpec, i: int) -> tuple[NodeGerm, ...]:
    return tuple(enumerate_node_germs(spec, i))


def enumerate_surface_floorplans(spec: DegreeSpec, delta: int):
    """Stream every delta-nodal floor plan in canonical order."""
    if spec.is_curve:
        raise ValueError("surface spec expected")
    for idx in index_tuples(spec, delta):
        for choice in itertools.product(*(germs_at(spec, i) for i in idx)):
            yield SurfaceFloorPlan(spec, delta, idx, tuple(choice))


# ---------------------------------------------------------------------------
# multiplicities


def germ_mult_complex(spec: DegreeSpec, g: NodeGerm) -> int:
    i = g.host
    if g.kind in ("parallelogram_a", "parallelogram_b"):
        return 2
    if g.kind == "weight2_midpoint":
        return 8
    if g.kind == "weight2_end":
        if spec.ambient is Ambient.P3:
            return 2 * (i + 1) if g.detail == "horizontal" else 2 * (i - 1)
        if spec.ambient is Ambient.P1XP2:
            return 2 * spec.e
        return 2 * spec.e if g.detail == "horizontal" else 2 * spec.f
    if g.kind == "left_string":
        return 2
    if g.kind == "right_string":
        return 1 if g.detail == "vertex" else 2
    raise ValueError(f"unknown germ kind {g.kind}")


def check_real_preconditions(spec: DegreeSpec, signs: SignVector | None = None) -> None:
    kind = signs.kind if signs is not None else None
    if spec.ambient in (Ambient.P3, Ambient.P1XP2):
        if kind not in (None, "all_plus"):
            raise RealPreconditionError("real tables for this ambient use the all-plus sign vector")
        if spec.ambient is Ambient.P1XP2 and spec.e % 4 != 0:
            raise RealPreconditionError(f"real P1xP2 counts need e = 0 mod 4, got e={spec.e}")
    elif spec.ambient is Ambient.P1P1P1:
        if kind not in (None, "p1p1p1_special"):
            raise RealPreconditionError("real tridegree tables use the special sign vector")
        if spec.e % 2 != 0:
            raise RealPreconditionError(f"real P1xP1xP1 counts need e even, got e={spec.e}")
    else:
        raise ValueError("surface spec expected")


def _theta(spec: DegreeSpec, signs: SignVector | None) -> int:
    if signs is not None and signs.theta is not None:
        return signs.theta
    return special_theta(spec.e, spec.f)


def _odd(n2: int) -> bool:
    """Whether the integer n2 / 2 is odd."""
    if n2 % 2:
        raise AssertionError("parity expression is not an integer")
    return (n2 // 2) % 2 == 1


def germ_mult_real(spec: DegreeSpec, g: NodeGerm, signs: SignVector | None = None) -> int:
    check_real_preconditions(spec, signs)
    i = g.host
    k, l = g.placement
    if g.kind == "weight2_midpoint":
        return 0
    if g.kind == "weight2_end" and g.detail == "horizontal":
        return 0
    amb = spec.ambient
    if amb is Ambient.P3:
        if g.kind == "parallelogram_a":
            return 2 if _odd((3 * i + 2 + 2 * k + 2 * l) * (i - 1)) else 0
        if g.kind == "parallelogram_b":
            return 2 if _odd((i + 2 + 2 * l) * (i - 1)) else 0
        if g.kind == "weight2_end":
            return 2 * (i - 1)
    elif amb is Ambient.P1XP2:
        if g.kind in ("parallelogram_a", "parallelogram_b"):
            return 2
        if g.kind == "weight2_end":
            return 2 * spec.e
    else:
        e, f = spec.e, spec.f
        if g.kind in ("parallelogram_a", "parallelogram_b"):
            return 2 if tridegree_pattern(g, f) else 0
        if g.kind == "weight2_end":
            theta = _theta(spec, signs)
            return 2 * f if k <= 2 * ((e - 1) // 2) - 2 * theta + 1 else 0
        if g.kind in ("left_string", "right_string"):
            return 2 if (f + k) % 2 == 0 else 0
    if g.kind == "left_string":
        return 2 if (i - k) % 2 == 0 else 0
    if g.kind == "right_string":
        return 1 if g.detail == "vertex" else 0
    raise ValueError(f"unknown germ kind {g.kind}")


def tridegree_pattern(g: NodeGerm, f: int) -> bool:
    """Whether a parallelogram is (k,l),(k,l+1),(k+1,0),(k+1,1) or
    (k,f-1),(k,f),(k+1,l),(k+1,l+1) for some k, l."""
    k, l = g.placement
    if g.kind == "parallelogram_a":
        cell = {(k, 0), (k, 1), (k - 1, l), (k - 1, l + 1)}
    else:
        cell = {(k, f - 1), (k, f), (k + 1, l), (k + 1, l + 1)}
    cols = sorted({p[0] for p in cell})
    if len(cols) != 2 or cols[1] != cols[0] + 1:
        return False
    a = cols[0]
    left = sorted(p[1] for p in cell if p[0] == a)
    right = sorted(p[1] for p in cell if p[0] == a + 1)
    if right == [0, 1] and left[1] == left[0] + 1:
        return True
    return left == [f - 1, f] and right[1] == right[0] + 1


def surface_mult_complex(plan: SurfaceFloorPlan) -> int:
    out = 1
    for g in plan.germs:
        out *= germ_mult_complex(plan.spec, g)
    return out


def surface_mult_real(plan: SurfaceFloorPlan, signs: SignVector | None = None) -> int:
    out = 1
    for g in plan.germs:
        out *= germ_mult_real(plan.spec, g, signs)
    return out


def germ_weight(spec: DegreeSpec, i: int, field: str = "complex",
                signs: SignVector | None = None) -> int:
    """Sum of germ multiplicities over all germs at index i."""
    if field == "complex":
        return sum(germ_mult_complex(spec, g) for g in germs_at(spec, i))
    return sum(germ_mult_real(spec, g, signs) for g in germs_at(spec, i))


def total_counts(spec: DegreeSpec, delta: int, field: str = "complex",
                 signs: SignVector | None = None, method: str = "stream") -> int:
    """Sum of plan multiplicities over the full enumeration.

    ``stream`` walks every plan; ``factored`` sums, over index tuples, the
    product of per-index germ sums taken from the same explicit germ lists.
    """
    if field not in ("complex", "real"):
        raise ValueError("field must be complex or real")
    if field == "real":
        check_real_preconditions(spec, signs)
    if method == "stream":
        mult = surface_mult_complex if field == "complex" else (
            lambda p: surface_mult_real(p, signs))
        return sum(mult(p) for p in enumerate_surface_floorplans(spec, delta))
    if method == "factored":
        total = 0
        for idx in index_tuples(spec, delta):
            prod = 1
            for i in idx:
                prod *= germ_weight(spec, i, field, signs)
            total += prod
        return total
    raise ValueError(f"unknown method {method!r}")


def discriminant_degree(spec: DegreeSpec) -> int:
    """Degree of the discriminant of the surface linear system (the delta=1 count)."""
    if spec.ambient is Ambient.P3:
        return 4 * (spec.d - 1) ** 3
    if spec.ambient is Ambient.P1XP2:
        d, e = spec.params
        return 12 * d * e * e - 18 * d * e - 6 * e * e + 12 * e + 6 * d - 6
    d, e, f = spec.params
    return 24 * d * e * f - 12 * (d * e + d * f + e * f) + 8 * (d + e + f) - 8


# ---------------------------------------------------------------------------
# composition


class _Projected:
    """View of a 3D configuration through its last two coordinates."""

    def __init__(self, points: PointConfig):
        self.points = points

    def __getitem__(self, k):
        return self.points[k][1:]


def _edge_height(curve: PlaneCurve, dual) -> Fraction:
    for e in curve.edges:
        if set(e.dual) == set(dual) and e.is_horizontal():
            return e.anchor[1]
    raise AssertionError(f"no horizontal edge dual to {dual}")


def _target_point(curve: PlaneCurve, g: NodeGerm):
    if g.detail == "vertex":
        for v, cell in enumerate(curve.cells):
            if tuple(hull2d(cell)) == tuple(g.target):
                return curve.vertices[v]
        raise AssertionError(f"no vertex dual to {g.target}")
    for e in curve.edges:
        if set(e.dual) == set(g.target) and e.bounded:
            a, b = curve.edge_points(e)
            return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    raise AssertionError(f"no bounded edge dual to {g.target}")


def germ_curve(spec: DegreeSpec, g: NodeGerm, block: list[int], q,
               neighbors: dict[int, PlaneCurve]) -> PlaneCurve:
    """The floor curve C_i carrying germ g through the points ``block``.

    ``q`` maps a global Q-index to its (y, z) projection; ``neighbors`` holds
    the already composed smooth curves C_{i-1} and C_{i+1}.
    """
    from .curve_floorplans import CurveFloorPlan, Defect, Divisor1D, DivisorPoint, compose_curve
    from .curve_floorplans import enumerate_curve_floorplans

    hs = host_spec(spec, g.host)
    m = hs.d
    loc = lambda t: q[block[t - 1]]  # noqa: E731
    if g.kind in ("parallelogram_a", "parallelogram_b", "weight2_midpoint"):
        plan = next(p for p in enumerate_curve_floorplans(hs) if p.key() == g.plan_key)
        return compose_curve(plan, q, labels=block)

    def layout_columns(j, free_root=None, drop_top=False, drop_bottom=False, double=None):
        lay = curve_layout(hs, j)
        if len(lay.used()) != len(block):
            raise AssertionError("germ layout does not match the allocated block")
        cols = {}
        for k in column_heights(hs):
            i = m - k
            roots = [loc(t)[1] for t in lay.indices(i)] if i in lay.blocks else []
            base = 0
            if i == j:
                if double is not None:
                    roots.append(roots[double])
                elif free_root is not None:
                    roots.append(free_root)
                if drop_bottom:
                    base = 1
            cols[k] = ColumnSpec(tuple(sorted(roots)), base)
        floors = {m - i: loc(t) for i, t in lay.floor_points.items()}
        return cols, floors

    if g.kind == "weight2_end":
        k, s = g.placement
        if g.detail == "horizontal":
            cols, floors = layout_columns(m - k, double=s)
        elif g.detail == "diagonal":
            cols, floors = layout_columns(m - k, drop_top=True)
        else:
            cols, floors = layout_columns(m - k, drop_bottom=(g.side == "down"))
        return curve_from_columns(cols, floors, hs)
    if g.kind == "left_string":
        height = _edge_height(neighbors[g.host + 1], g.target)
        cols, floors = layout_columns(m, free_root=height)
        return curve_from_columns(cols, floors, hs)
    if g.kind == "right_string":
        if spec.ambient is Ambient.P1P1P1:
            height = _edge_height(neighbors[g.host - 1], g.target)
            cols, floors = layout_columns(0, free_root=height)
            return curve_from_columns(cols, floors, hs)
        lay = smooth_curve_layout(hs)
        if len(lay.used()) != len(block) + 1:
            raise AssertionError("right string block size mismatch")
        cols = {}
        for k in column_heights(hs):
            i = m - k
            roots = [loc(t)[1] for t in lay.indices(i)] if i in lay.blocks else []
            cols[k] = ColumnSpec(tuple(sorted(roots)))
        floors = {m - i: loc(t) for i, t in lay.floor_points.items() if i != 1}
        floors[m - 1] = _target_point(neighbors[g.host - 1], g)
        return curve_from_columns(cols, floors, hs)
    raise ValueError(f"unknown germ kind {g.kind}")


@dataclass
class TropicalSurface:
    """Floor-composed tropical surface  max_a (a x + s_a + G_a(y, z))."""

    spec: DegreeSpec
    slices: dict[int, dict[tuple[int, int], Fraction]]  # a -> {(k, l): coefficient}
    curves: dict[int, PlaneCurve]  # a -> floor curve in slice a
    shifts: dict[int, Fraction]
    points: list = field(default_factory=list)
    cells: list = field(default_factory=list)  # 3D dual cells, filled by certify()

    def coefficients(self):
        for a, G in self.slices.items():
            for (k, l), c in G.items():
                yield (a, k, l), c + self.shifts[a]

    def poly(self) -> "MaxPlus":
        if "_poly" not in self.__dict__:
            self.__dict__["_poly"] = MaxPlus(dict(self.coefficients()))
        return self.__dict__["_poly"]

    def argmax(self, p):
        return self.poly().argmax(p)

    def contains(self, p) -> bool:
        return len(self.argmax(p)) >= 2

    def to_json(self) -> dict:
        from .model import frac_str

        return {
            "spec": self.spec.to_json(),
            "shifts": {str(a): frac_str(s) for a, s in sorted(self.shifts.items())},
            "floors": {str(a): c.to_json() for a, c in sorted(self.curves.items())},
            "dual_cells": [[list(p) for p in sorted(c)] for c in self.cells],
        }


class MaxPlus:
    """A tropical polynomial evaluated exactly in scaled integer arithmetic."""

    def __init__(self, terms: dict):
        self.exps = list(terms)
        self.den = lcm(*(Fraction(c).denominator for c in terms.values()))
        self.nums = [int(Fraction(c) * self.den) for c in terms.values()]

    def _values(self, p):
        m = lcm(self.den, *(Fraction(q).denominator for q in p))
        scale = m // self.den
        coords = [Fraction(q).numerator * (m // Fraction(q).denominator) for q in p]
        vals = [n * scale + sum(e * c for e, c in zip(ex, coords))
                for ex, n in zip(self.exps, self.nums)]
        return vals, m

    def argmax(self, p):
        vals, _ = self._values(p)
        best = max(vals)
        return sorted(ex for ex, v in zip(self.exps, vals) if v == best)

    def value(self, p) -> Fraction:
        vals, m = self._values(p)
        return Fraction(max(vals), m)


def _curve_value(G, p):
    return MaxPlus(G).value(p)


def smooth_floor_curve(spec: DegreeSpec, i: int, block: tuple[int, ...], q) -> PlaneCurve:
    from .plane_curves import compose_smooth

    return compose_smooth(host_spec(spec, i), q, labels=list(block))


def compose_surface(plan: SurfaceFloorPlan, points: PointConfig | None = None,
                    cache: dict | None = None) -> TropicalSurface:
    """Floor-composed surface of a plan through its stretched points.

    ``cache`` (optional) reuses smooth floor curves between plans that share
    the configuration.
    """
    spec, delta = plan.spec, plan.delta
    lay = surface_layout(spec, delta, plan.indices)
    if points is None:
        points = PointConfig.stretched(spec.point_count(delta), 3)
    q = _Projected(points)
    cache = cache if cache is not None else {}
    curves: dict[int, PlaneCurve] = {}
    for i in surface_curve_labels(spec):
        if plan.germ_at(i) is None:
            block = tuple(lay.indices(i))
            key = (spec, i, block, id(points))
            if key not in cache:
                cache[key] = smooth_floor_curve(spec, i, block, q)
            curves[i] = cache[key]
    for g in plan.germs:
        curves[g.host] = germ_curve(spec, g, lay.indices(g.host), q, curves)
    d = spec.d
    slices = {d - i: dict(c.coeffs) for i, c in curves.items()}
    by_slice = {d - i: c for i, c in curves.items()}
    if spec.ambient is Ambient.P3:
        slices[d] = {(0, 0): Fraction(0)}
    shifts = {d: Fraction(0)}
    for a in range(d - 1, -1, -1):
        x, y, z = points[lay.floor_points[d - a]]
        shifts[a] = x + shifts[a + 1] + _curve_value(slices[a + 1], (y, z)) \
            - _curve_value(slices[a], (y, z))
    return TropicalSurface(spec, slices, by_slice, shifts, [points[t] for t in lay.used()])


# -- certificate -------------------------------------------------------------


def _edge_box(curve: PlaneCurve, e):
    """Bounding box (xlo, xhi, ylo, yhi) of an edge; None marks an unbounded side."""
    if e.bounded:
        p, q = curve.edge_points(e)
        return min(p[0], q[0]), max(p[0], q[0]), min(p[1], q[1]), max(p[1], q[1])
    if e.v0 is None and e.v1 is None:  # a whole line
        x, y = e.anchor
        return (x, x, None, None) if e.direction[0] == 0 else \
            (None, None, y, y) if e.direction[1] == 0 else (None, None, None, None)
    x, y = curve.vertices[e.v0]  # rays start at v0
    dx, dy = e.direction
    return (x if dx >= 0 else None, x if dx <= 0 else None,
            y if dy >= 0 else None, y if dy <= 0 else None)


def _boxes_meet(b1, b2) -> bool:
    for lo1, hi1, lo2, hi2 in ((b1[0], b1[1], b2[0], b2[1]), (b1[2], b1[3], b2[2], b2[3])):
        if hi1 is not None and lo2 is not None and hi1 < lo2:
            return False
        if hi2 is not None and lo1 is not None and hi2 < lo1:
            return False
    return True


def _crossings(c1: PlaneCurve, c2: PlaneCurve):
    out = set()
    boxes2 = [_edge_box(c2, e) for e in c2.edges]
    for e1 in c1.edges:
        b1 = _edge_box(c1, e1)
        for e2, b2 in zip(c2.edges, boxes2):
            (dx1, dy1), (dx2, dy2) = e1.direction, e2.direction
            det = dx1 * dy2 - dy1 * dx2
            if det == 0 or not _boxes_meet(b1, b2):
                continue
            p1 = c1.vertices[e1.v0] if e1.v0 is not None else e1.anchor
            p2 = c2.vertices[e2.v0] if e2.v0 is not None else e2.anchor
            rx, ry = p2[0] - p1[0], p2[1] - p1[1]
            t = Fraction(rx * dy2 - ry * dx2, det)
            p = (p1[0] + t * dx1, p1[1] + t * dy1)
            if c1.on_edge(p, e1, interior=False) and c2.on_edge(p, e2, interior=False):
                out.add(p)
    return out


def _cayley_volume(A, B) -> int:
    """Normalized volume of conv(A x {0} u B x {1}) for planar lattice sets."""
    AB = {(a[0] + b[0], a[1] + b[1]) for a in A for b in B}
    n2 = twice_area(hull2d(A)) + twice_area(hull2d(B)) + twice_area(hull2d(AB))
    if n2 % 2:
        raise AssertionError("odd Cayley volume")
    return n2 // 2


def slab_volume(spec: DegreeSpec, a: int) -> int:
    if spec.ambient is Ambient.P3:
        s = spec.d - a
        return s ** 3 - (s - 1) ** 3
    if spec.ambient is Ambient.P1XP2:
        return 3 * spec.e ** 2
    return 6 * spec.e * spec.f


def _faces3d(points):
    pts = sorted(points)
    faces = set()
    for p0, p1, p2 in itertools.combinations(pts, 3):
        u = tuple(b - a for a, b in zip(p0, p1))
        v = tuple(b - a for a, b in zip(p0, p2))
        n = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if n == (0, 0, 0):
            continue
        side = [sum(nc * (pc - oc) for nc, pc, oc in zip(n, p, p0)) for p in pts]
        if all(s <= 0 for s in side) or all(s >= 0 for s in side):
            faces.add(frozenset(p for p, s in zip(pts, side) if s == 0))
    return faces


def _on_boundary(spec: DegreeSpec, face) -> bool:
    d = spec.d
    tests = [lambda p: p[0] == 0, lambda p: p[0] == d, lambda p: p[1] == 0, lambda p: p[2] == 0]
    if spec.ambient is Ambient.P3:
        tests = tests[:1] + tests[2:] + [lambda p: sum(p) == d]
    elif spec.ambient is Ambient.P1XP2:
        tests.append(lambda p: p[1] + p[2] == spec.e)
    else:
        tests += [lambda p: p[1] == spec.e, lambda p: p[2] == spec.f]
    return any(all(t(p) for p in face) for t in tests)


@dataclass
class SurfaceReport:
    incidence: bool
    slabs_ok: bool
    volume_ok: bool
    balanced: bool
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.incidence and self.slabs_ok and self.volume_ok and self.balanced


def certify_surface(surf: TropicalSurface) -> SurfaceReport:
    """Exact incidence, floor structure, volume and balancing certificate."""
    spec = surf.spec
    details = []
    incidence = all(surf.contains(p) for p in surf.points)
    if not incidence:
        details.append("a configuration point is off the surface")
    slabs_ok = volume_ok = True
    cells = []
    d = spec.d
    for a in range(d):
        c_lo, c_hi = surf.curves.get(a), surf.curves.get(a + 1)
        P_lo, P_hi = MaxPlus(surf.slices[a]), MaxPlus(surf.slices[a + 1])
        cand = set()
        for c in (c_lo, c_hi):
            if c is not None:
                cand.update(c.vertices)
        if c_lo is not None and c_hi is not None:
            cand |= _crossings(c_lo, c_hi)
        vol = 0
        for v in cand:
            A, B = P_lo.argmax(v), P_hi.argmax(v)
            nv = _cayley_volume(A, B)
            if nv == 0:
                continue
            x = surf.shifts[a] + P_lo.value(v) - surf.shifts[a + 1] - P_hi.value(v)
            want = sorted([(a,) + p for p in A] + [(a + 1,) + p for p in B])
            if surf.argmax((x, v[0], v[1])) != want:
                slabs_ok = False
                details.append(f"slab {a}: another floor interferes at {v}")
            vol += nv
            cells.append(frozenset(want))
        if vol != slab_volume(spec, a):
            volume_ok = False
            details.append(f"slab {a}: cell volume {vol} != {slab_volume(spec, a)}")
    faces = Counter()
    for c in cells:
        faces.update(_faces3d(c))
    balanced = True
    for face, cnt in faces.items():
        need = 1 if _on_boundary(spec, face) else 2
        if cnt != need:
            balanced = False
            details.append(f"2-face {sorted(face)} shared by {cnt} cells")
            break
    surf.cells = cells
    return SurfaceReport(incidence, slabs_ok, volume_ok, balanced, details)
