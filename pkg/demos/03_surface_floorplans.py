"""Nodal surfaces from floor plans.

A plan places node germs on separated floor curves.  Composing the floors
gives a tropical surface through the stretched points; its dual subdivision is
certified slab by slab.
"""

from floorcount.model import DegreeSpec
from floorcount.surface_floorplans import (certify_surface, compose_surface, discriminant_degree,
                                           enumerate_surface_floorplans, surface_mult_complex,
                                           surface_mult_real, total_counts)

quadric = DegreeSpec.p3(2)
for plan in enumerate_surface_floorplans(quadric, 1):
    surf = compose_surface(plan)
    rep = certify_surface(surf)
    g = plan.germs[0]
    print(f"i={plan.indices[0]} {g.kind} ({g.detail}): complex {surface_mult_complex(plan)}, "
          f"real {surface_mult_real(plan)}, certified {rep.ok}")

for spec in [DegreeSpec.p3(4), DegreeSpec.p1xp2(3, 4), DegreeSpec.p1p1p1(2, 3, 4)]:
    print(f"{spec.label():16s} delta=1 total {total_counts(spec, 1):6d}"
          f"  discriminant degree {discriminant_degree(spec):6d}")

spec = DegreeSpec.p3(5)
print(f"{spec.label()} delta=2: complex {total_counts(spec, 2)}, real {total_counts(spec, 2, 'real')}")
