"""Counting at scale.

Per-index germ sums turn the plan count into a prefix-sum DP over separated
index tuples, so degree 2000 costs milliseconds.  Ratios against the leading
terms approach 1.
"""

from floorcount.counting import (build_weight_table, convergence_report, dp_count, faulhaber,
                                 leading_term, partition_identity)
from floorcount.model import DegreeSpec
from floorcount.surface_floorplans import total_counts

spec = DegreeSpec.p3(8)
table = build_weight_table(spec)
print("weights by index:", table.rows())
print("DP vs enumeration, delta=3:", dp_count(table, 3), total_counts(spec, 3))

for amb in ("p3", "p1xp2", "p1p1p1"):
    for field in ("complex", "real"):
        coeff, expo = leading_term(amb, field, 2)
        print(f"{amb:7s} {field:7s} delta=2 leading {coeff} * {expo}, "
              f"partition identity {partition_identity(amb, field, 2)}")

rep = convergence_report("p3", "real", 2, [250, 500, 1000, 2000])
for row in rep.rows:
    print(f"d={row.params[0]:5d} ratio {float(row.ratio):.6f}")
print("monotone:", rep.monotone, "final deviation:", round(rep.final_deviation, 5))
print("sum of squares to 100:", faulhaber(100, 2))
