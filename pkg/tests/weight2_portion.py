"""The weight-2 curve portion between two adjacent floors, rebuilt from a plan.

Degree 6, node on D_5 with the weight-2 point at the third fixed point of D_5,
block sign vector.  Floor 0 is the left floor (its point is the first of the
six marked points), floor 1 the right floor.
"""

from floorcount.curve_floorplans import compose_curve, enumerate_curve_floorplans
from floorcount.model import DegreeSpec, add_signs, build_sign_vector
from floorcount.plane_curves import default_points
from floorcount.real_phase import assign_real_structure, floors, mu_alpha_X, plan_marks

SPEC = DegreeSpec.p2(6)

# printed labels, left floor from its marked edge upward, right floor from its
# lowest edge up to its marked edge; each label is a pair of named signs
LEFT_LABELS = [("e", "e2"), ("e1", "e2"), ("e", "e2"), ("e", "e2"), ("e1", "e2")]
RIGHT_LABELS = [("e", "e3"), ("e1", "e3"), ("e", "e3"), ("e", "e3"), ("e1", "e3")]
MARK_SIGNS = ["e", "e", "e1", "e", "e1", "e1"]


def named(eps, third_offset=(1, 1)):
    """Named signs for a base sign eps; ``third_offset`` is the shift defining e3."""
    return {"e": eps, "e1": add_signs(eps, (1, 0)), "e2": add_signs(eps, (0, 1)),
            "e3": add_signs(eps, third_offset)}


def build(eps=(0, 0)):
    plan = next(p for p in enumerate_curve_floorplans(SPEC)
                if p.j == 5 and p.defect.kind == "weight2" and p.defect.slot == 2)
    points = default_points(SPEC, SPEC.point_count())
    signs = build_sign_vector(SPEC, kind="bertrand", eps=eps, free=[eps] * SPEC.d)
    curve = compose_curve(plan, points)
    dec = assign_real_structure(curve, plan_marks(plan, points, signs))
    return plan, points, signs, curve, dec


def floor_chain(curve, dec, floor):
    """Classes of the non-horizontal edges of a floor, bottom to top, and the
    position of the marked one."""
    edges = []
    for idx, e in enumerate(curve.edges):
        cols = {b[0] for b in e.dual}
        if e.is_horizontal() or cols != {floor, floor + 1}:
            continue
        edges.append((e.anchor[1], idx))
    edges.sort()
    marked = {m[1] for m in dec.marks}
    classes = [dec.classes[i] for _, i in edges]
    where = [n for n, (_, i) in enumerate(edges) if i in marked]
    return classes, where[0]


def portion(curve, dec):
    """The ten labelled floor edges: left floor from its mark up five edges,
    right floor the five edges ending at its mark."""
    left, lm = floor_chain(curve, dec, 0)
    right, rm = floor_chain(curve, dec, 1)
    return left[lm:lm + 5], right[rm - 4:rm + 1]


def alpha_factors(curve, dec):
    alpha = next(i for i, e in enumerate(curve.edges) if e.weight == 2)
    out = []
    for X in floors(curve):
        for v in (curve.edges[alpha].v0, curve.edges[alpha].v1):
            if v in X:
                fe = next(i for i, _ in curve.incident(v) if not curve.edges[i].is_horizontal())
                out.append(mu_alpha_X(dec.classes[alpha], dec.classes[fe]))
    return alpha, out
