"""Real structures on floor-decomposed curves.

Signs of the marked points spread over the edges as classes in Z_2^2.  A
weight-2 elevator contributes 2 to each adjacent floor whose class contains
its own; with block sign vectors every plan is maximal.
"""

from floorcount.curve_floorplans import closed_form_count, compose_curve, enumerate_curve_floorplans
from floorcount.model import DegreeSpec, build_sign_vector
from floorcount.plane_curves import default_points
from floorcount.real_phase import assign_real_structure, count_real_1nodal, mu_curve, plan_marks

spec = DegreeSpec.p2(6)
points = default_points(spec, spec.point_count())
signs = build_sign_vector(spec, kind="bertrand")
plan = next(p for p in enumerate_curve_floorplans(spec)
            if p.j == 5 and p.defect.kind == "weight2" and p.defect.slot == 2)
curve = compose_curve(plan, points)
dec = assign_real_structure(curve, plan_marks(plan, points, signs))

print("signs of the six points around the node:",
      ["".join("+-"[c] for c in signs[t]) for t in range(7, 13)])
for idx, e in enumerate(curve.edges):
    if not e.is_horizontal() and {b[0] for b in e.dual} in ({0, 1}, {1, 2}):
        print(f"  floor edge dir {e.direction}: {dec.classes[idx].label()}")
print("real multiplicity:", mu_curve(dec))

for s in [DegreeSpec.p2(d) for d in range(2, 7)] + [DegreeSpec.p1p1(3, 3)]:
    print(f"{s.label():12s} real {count_real_1nodal(s):4d}  complex {closed_form_count(s):4d}")
allplus = build_sign_vector(DegreeSpec.p2(4), kind="all_plus")
print("P2(4) with all signs positive:", count_real_1nodal(DegreeSpec.p2(4), allplus))
