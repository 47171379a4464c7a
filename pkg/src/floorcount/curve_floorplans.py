"""1-nodal floor plans of plane tropical curves.

A plan picks a divisor D_j that carries the node: either one of its points
has weight 2, or its single unconstrained point lines up with a point of a
neighbouring divisor.  Divisor D_i lives in column d - i of the Newton polygon.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Ambient, DegreeSpec, PointConfig, curve_layout
from .plane_curves import ColumnSpec, PlaneCurve, column_heights, curve_from_columns, default_points


@dataclass(frozen=True)
class DivisorPoint:
    position: int | None  # Q-index, or None for the unconstrained point
    weight: int = 1

    def to_json(self) -> dict:
        return {"q_index" if self.position is not None else "free":
                self.position if self.position is not None else True, "weight": self.weight}


@dataclass(frozen=True)
class Divisor1D:
    label: int
    points: tuple[DivisorPoint, ...]

    @property
    def degree(self) -> int:
        return sum(p.weight for p in self.points)

    def to_json(self) -> dict:
        return {"label": self.label, "points": [p.to_json() for p in self.points]}


@dataclass(frozen=True)
class Defect:
    """``kind`` is "weight2" (slot among the fixed points of D_j) or "align"
    (``neighbor`` is j+1 or j-1, ``slot`` the target point of that divisor)."""

    kind: str
    slot: int
    neighbor: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "slots": [self.slot]}
        if self.neighbor is not None:
            out["neighbor"] = self.neighbor
        return out


@dataclass(frozen=True)
class CurveFloorPlan:
    spec: DegreeSpec
    j: int
    divisors: tuple[Divisor1D, ...]
    defect: Defect

    def divisor(self, i: int) -> Divisor1D:
        return next(D for D in self.divisors if D.label == i)

    @property
    def column(self) -> int:
        """Column of the Newton polygon hosting D_j."""
        return self.spec.d - self.j

    def free_target(self) -> int:
        """Q-index the unconstrained point of D_j is placed at."""
        if self.defect.kind == "weight2":
            fixed = [p.position for p in self.divisor(self.j).points if p.position is not None]
            return fixed[self.defect.slot]
        pts = self.divisor(self.defect.neighbor).points
        return pts[self.defect.slot].position

    def placement(self) -> tuple[str, tuple[int, int]]:
        """Shape of the defect in the dual subdivision.

        weight2_midpoint (k, s): weight-2 edge dual to (k, s)-(k, s+2).
        parallelogram_a (k, l): (k,0),(k,1),(k-1,l),(k-1,l+1).
        parallelogram_b (k, l): top segment of column k with (k+1,l),(k+1,l+1).
        """
        k = self.column
        if self.defect.kind == "weight2":
            return "weight2_midpoint", (k, self.defect.slot)
        if self.defect.neighbor == self.j + 1:
            return "parallelogram_a", (k, self.defect.slot)
        return "parallelogram_b", (k, self.defect.slot)

    def key(self):
        return (self.j, self.defect.kind, self.defect.neighbor or 0, self.defect.slot)

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "j": self.j,
                "divisors": [D.to_json() for D in self.divisors],
                "defect": self.defect.to_json(), "multiplicity": curve_mult_complex(self)}


def _index_range(spec: DegreeSpec):
    return range(1 if spec.ambient is Ambient.P2 else 0, spec.d + 1)


def enumerate_curve_floorplans(spec: DegreeSpec) -> list[CurveFloorPlan]:
    """All 1-nodal floor plans of the given plane degree, in canonical order."""
    if not spec.is_curve:
        raise ValueError("curve spec expected")
    d = spec.d
    lo = 1 if spec.ambient is Ambient.P2 else 0
    plans = []
    for j in _index_range(spec):
        lay = curve_layout(spec, j)
        divs = []
        for i in sorted(lay.blocks, reverse=True):
            pts = tuple(DivisorPoint(q) for q in lay.indices(i))
            if i == j:
                pts = pts + (DivisorPoint(None),)
            divs.append(Divisor1D(i, pts))
        divs = tuple(divs)
        nfixed = len(lay.indices(j))
        defects = []
        if lo < j < d:
            defects += [Defect("weight2", s) for s in range(nfixed)]
        for nb in (j + 1, j - 1):
            if nb in lay.blocks:
                targets = lay.indices(nb)
                defects += [Defect("align", s, nb) for s in range(len(targets))]
        for df in defects:
            plans.append(CurveFloorPlan(spec, j, divs, df))
    plans.sort(key=CurveFloorPlan.key)
    return plans


def curve_mult_complex(plan: CurveFloorPlan) -> int:
    return 4 if plan.defect.kind == "weight2" else 1


def count_1nodal_curves(spec: DegreeSpec) -> int:
    return sum(curve_mult_complex(p) for p in enumerate_curve_floorplans(spec))


def closed_form_count(spec: DegreeSpec) -> int:
    if spec.ambient is Ambient.P2:
        return 3 * (spec.d - 1) ** 2
    d, e = spec.params
    return 6 * d * e - 4 * d - 4 * e + 4


def plan_columns(plan: CurveFloorPlan, q) -> dict[int, ColumnSpec]:
    """Column roots of the curve of a plan; ``q`` maps a Q-index to its point."""
    spec = plan.spec
    cols = {}
    for k in column_heights(spec):
        i = spec.d - k
        roots = []
        pts = plan.divisor(i).points if any(D.label == i for D in plan.divisors) else ()
        for p in pts:
            pos = p.position if p.position is not None else plan.free_target()
            roots += [q(pos)[1]] * p.weight
        cols[k] = ColumnSpec(tuple(sorted(roots)))
    return cols


def compose_curve(plan: CurveFloorPlan | DegreeSpec, points: PointConfig | None = None,
                  labels: list[int] | None = None) -> PlaneCurve:
    """Floor-composed curve of a plan (or the smooth curve of a spec).

    ``labels`` maps the plan's local Q-indices onto indices of ``points``.
    """
    from .plane_curves import compose_smooth

    if isinstance(plan, DegreeSpec):
        return compose_smooth(plan, points, labels)
    spec = plan.spec
    if points is None:
        points = default_points(spec, spec.point_count())
    q = (lambda t: points[labels[t - 1]]) if labels is not None else (lambda t: points[t])
    lay = curve_layout(spec, plan.j)
    floors = {spec.d - i: tuple(q(t)[:2]) for i, t in lay.floor_points.items()}
    curve = curve_from_columns(plan_columns(plan, q), floors, spec)
    curve.marks = {"points": [tuple(q(t)[:2]) for t in lay.used()], "plan": plan.key()}
    return curve


def nodal_signature(curve: PlaneCurve):
    """Classify the dual subdivision: ("smooth",), ("parallelogram", cell),
    ("weight2", dual edge) or ("other",)."""
    from .plane_curves import hull2d, twice_area

    odd = []
    for c in curve.cells:
        h = hull2d(c)
        a = twice_area(h)
        if a == 1 and len(c) == 3:
            continue
        odd.append((a, tuple(h), tuple(c)))
    if not odd:
        return ("smooth",)
    if len(odd) == 1:
        a, h, c = odd[0]
        if a == 2 and len(h) == 4 and len(c) == 4:
            p0, p1, p2, p3 = h
            if (p0[0] + p2[0], p0[1] + p2[1]) == (p1[0] + p3[0], p1[1] + p3[1]):
                return ("parallelogram", h)
    if len(odd) == 2 and all(a == 2 and len(h) == 3 for a, h, _ in odd):
        heavy = [e for e in curve.edges if e.weight == 2 and e.bounded]
        others = [e for e in curve.edges if e.weight > 1 and e not in heavy]
        if len(heavy) == 1 and not others:
            return ("weight2", heavy[0].dual)
    return ("other",)
