"""Real phase structures on floor-decomposed plane curves.

Every edge e of weight w and primitive direction v carries a class of signs in
Z_2^2 modulo w*v: two signs for odd weight, one sign for even weight.  Classes
are fixed on marked edges by the signs of the points and spread through
vertices; the real multiplicity then reads the classes around weight-2 edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DegreeSpec, PointConfig, SignVector, add_signs, build_sign_vector, curve_layout
from .plane_curves import Edge, PlaneCurve

Sign = tuple[int, int]
SIGNS: tuple[Sign, ...] = ((0, 0), (1, 0), (0, 1), (1, 1))


class DecorationError(ValueError):
    """No sign decoration is compatible with the marks."""


@dataclass(frozen=True)
class EdgeSignClass:
    elements: frozenset
    generator: Sign

    @classmethod
    def of(cls, edge: Edge, sign: Sign) -> "EdgeSignClass":
        gen = ((edge.weight * edge.direction[0]) % 2, (edge.weight * edge.direction[1]) % 2)
        return cls(frozenset({tuple(sign), add_signs(sign, gen)}), gen)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.elements

    def label(self) -> list[str]:
        return sorted("".join("+-"[c] for c in s) for s in self.elements)


def propagate_vertex(s1: EdgeSignClass, s2: EdgeSignClass) -> EdgeSignClass:
    """Class of the third edge at a trivalent vertex with odd weights only."""
    if s1.elements == s2.elements:
        raise DecorationError("equal classes at a trivalent vertex leave the third edge empty")
    out = s1.elements ^ s2.elements
    if len(out) != 2:
        raise DecorationError("classes at a trivalent vertex are inconsistent")
    a, b = sorted(out)
    return EdgeSignClass(frozenset(out), add_signs(a, b))


@dataclass
class RealDecoratedCurve:
    curve: PlaneCurve
    classes: dict[int, EdgeSignClass]
    marks: list  # (point, edge index, sign)

    def class_of(self, edge_index: int) -> EdgeSignClass:
        return self.classes[edge_index]

    def to_json(self) -> dict:
        return {"edges": [{"edge": i, "signs": self.classes[i].label()}
                          for i in sorted(self.classes)]}


def _opposite_pairs(curve: PlaneCurve, inc):
    pairs = []
    for a in range(len(inc)):
        for b in range(a + 1, len(inc)):
            (ia, da), (ib, db) = inc[a], inc[b]
            if da == (-db[0], -db[1]):
                pairs.append((ia, ib))
    return pairs


def assign_real_structure(curve: PlaneCurve, marks) -> RealDecoratedCurve:
    """Spread classes from signed marked points over the whole curve.

    ``marks`` is a list of (point, sign).  Raises DecorationError when the
    marks contradict each other or leave some edge undetermined.
    """
    classes: dict[int, EdgeSignClass] = {}
    placed = []

    def setc(idx, cls):
        old = classes.get(idx)
        if old is None:
            classes[idx] = cls
            return True
        if old.elements != cls.elements:
            raise DecorationError(f"edge {idx} gets two different classes")
        return False

    for p, s in marks:
        idx = curve.edge_at(tuple(p))
        if idx is None:
            raise DecorationError(f"marked point {p} is not inside an edge")
        setc(idx, EdgeSignClass.of(curve.edges[idx], s))
        placed.append((p, idx, tuple(s)))

    incident = [curve.incident(v) for v in range(len(curve.vertices))]
    changed = True
    while changed:
        changed = False
        for inc in incident:
            even = [i for i, _ in inc if curve.edges[i].weight % 2 == 0]
            odd = [i for i, _ in inc if curve.edges[i].weight % 2 == 1]
            if even:
                # the odd edges around a weight-2 edge share their class
                if len(odd) == 2:
                    a, b = odd
                    if a in classes:
                        changed |= setc(b, classes[a])
                    elif b in classes:
                        changed |= setc(a, classes[b])
                continue
            if len(inc) == 4:
                for a, b in _opposite_pairs(curve, inc):
                    if a in classes:
                        changed |= setc(b, classes[a])
                    elif b in classes:
                        changed |= setc(a, classes[b])
                continue
            if len(inc) != 3:
                raise DecorationError(f"unsupported vertex of valence {len(inc)}")
            known = [i for i, _ in inc if i in classes]
            if len(known) == 2:
                third = next(i for i, _ in inc if i not in classes)
                changed |= setc(third, propagate_vertex(classes[known[0]], classes[known[1]]))
            elif len(known) == 3:
                a, b, c = known
                if (classes[a].elements ^ classes[b].elements) != classes[c].elements:
                    raise DecorationError("inconsistent classes at a trivalent vertex")
    missing = [i for i in range(len(curve.edges)) if i not in classes]
    if missing:
        raise DecorationError(f"{len(missing)} edges left without a class")
    for p, idx, s in placed:
        if s not in classes[idx]:
            raise DecorationError("a mark's sign is not in its edge class")
    return RealDecoratedCurve(curve, classes, placed)


def mu_alpha_X(s_alpha: EdgeSignClass, s_edge: EdgeSignClass) -> int:
    """Contribution of a weight-2 elevator alpha to an adjacent floor."""
    return 2 if s_alpha.elements <= s_edge.elements else 0


def floors(curve: PlaneCurve) -> list[set[int]]:
    """Vertex sets of the floors: components left after deleting horizontal edges."""
    parent = list(range(len(curve.vertices)))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in curve.edges:
        if e.bounded and not e.is_horizontal():
            parent[find(e.v0)] = find(e.v1)
    groups = {}
    for v in range(len(curve.vertices)):
        groups.setdefault(find(v), set()).add(v)
    return sorted(groups.values(), key=min)


def mu_curve(dec: RealDecoratedCurve) -> int:
    """Product over floors of the contributions of their even elevators."""
    curve = dec.curve
    out = 1
    for X in floors(curve):
        for idx, e in enumerate(curve.edges):
            if e.weight % 2 or not e.is_horizontal():
                continue
            for v in (e.v0, e.v1):
                if v is None or v not in X:
                    continue
                floor_edge = next(i for i, _ in curve.incident(v)
                                  if not curve.edges[i].is_horizontal())
                out *= mu_alpha_X(dec.classes[idx], dec.classes[floor_edge])
    return out


def plan_marks(plan, points: PointConfig, signs: SignVector):
    """(point, sign) pairs for the Q-indices a curve plan uses."""
    lay = curve_layout(plan.spec, plan.j)
    return [(points[t][:2], signs[t]) for t in lay.used()]


def real_multiplicity(plan, signs: SignVector, points: PointConfig | None = None) -> int:
    """mu_C of the composed curve of a plan; 0 when no decoration exists."""
    from .curve_floorplans import compose_curve
    from .plane_curves import default_points

    if points is None:
        points = default_points(plan.spec, plan.spec.point_count())
    curve = compose_curve(plan, points)
    try:
        dec = assign_real_structure(curve, plan_marks(plan, points, signs))
    except DecorationError:
        return 0
    return mu_curve(dec)


def count_real_1nodal(spec: DegreeSpec, signs: SignVector | None = None) -> int:
    """Sum of mu_C over all 1-nodal curve floor plans (block signs by default)."""
    from .curve_floorplans import enumerate_curve_floorplans
    from .plane_curves import default_points

    if signs is None:
        signs = build_sign_vector(spec, kind="bertrand")
    points = default_points(spec, spec.point_count())
    return sum(real_multiplicity(p, signs, points) for p in enumerate_curve_floorplans(spec))
