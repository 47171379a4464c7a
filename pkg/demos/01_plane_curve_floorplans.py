"""Nodal plane curves from floor plans.

Enumerate the 1-nodal floor plans of bidegree (2,2), build each tropical curve
through the stretched points and look at the node in its dual subdivision.
"""

from collections import Counter

from floorcount.curve_floorplans import (closed_form_count, compose_curve, count_1nodal_curves,
                                         curve_mult_complex, enumerate_curve_floorplans,
                                         nodal_signature)
from floorcount.model import DegreeSpec
from floorcount.plane_curves import incidence_check

spec = DegreeSpec.p1p1(2, 2)
plans = enumerate_curve_floorplans(spec)
print(f"{spec.label()}: {len(plans)} plans")
for plan in plans:
    curve = compose_curve(plan)
    kind = nodal_signature(curve)[0]
    ok = curve.is_balanced() and incidence_check(curve, curve.marks["points"])
    print(f"  j={plan.j} {plan.defect.kind:7s} -> {kind:13s} mult {curve_mult_complex(plan)}"
          f"  valid={ok}")

# the totals follow the closed forms in both ambients
for s in [DegreeSpec.p2(d) for d in range(2, 8)] + [DegreeSpec.p1p1(3, e) for e in range(1, 5)]:
    print(f"{s.label():12s} count {count_1nodal_curves(s):4d}  closed form {closed_form_count(s):4d}")

print(Counter(p.defect.kind for p in enumerate_curve_floorplans(DegreeSpec.p2(6))))
