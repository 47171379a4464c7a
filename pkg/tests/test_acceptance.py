"""Acceptance criteria 1-10, each at its stated tolerance.

Every criterion is a function returning (passed, detail); the tests assert on
them and a one-line verdict per criterion is printed in the pytest summary
(or directly when this file is run as a script).
"""

import math
import time
from fractions import Fraction

import pytest

import weight2_portion as fig
from floorcount.counting import (LEADING, build_weight_table, convergence_report, dp_count,
                                 partition_identity, signs_for)
from floorcount.curve_floorplans import (closed_form_count, compose_curve, count_1nodal_curves,
                                         enumerate_curve_floorplans)
from floorcount.model import Ambient, DegreeSpec, build_sign_vector
from floorcount.plane_curves import default_points, incidence_check
from floorcount.real_phase import count_real_1nodal, mu_curve
from floorcount.surface_floorplans import (certify_surface, compose_surface,
                                           enumerate_surface_floorplans, germ_mult_complex,
                                           germ_mult_real, germs_at, surface_mult_complex,
                                           surface_mult_real, total_counts)

RESULTS: dict[int, tuple[bool, str]] = {}

CURVES_1 = [DegreeSpec.p2(d) for d in range(1, 11)] + \
    [DegreeSpec.p1p1(d, e) for d in range(1, 7) for e in range(1, 7)]
CURVES_2 = [DegreeSpec.p2(d) for d in range(2, 8)] + \
    [DegreeSpec.p1p1(d, e) for d in range(1, 5) for e in range(1, 5)]
SURFACES_4 = [DegreeSpec.p3(d) for d in range(2, 7)]


def domain_5():
    specs = [DegreeSpec.p3(d) for d in range(1, 10)]
    specs += [DegreeSpec.p1xp2(d, e) for d in range(1, 10) for e in range(1, 10)]
    specs += [DegreeSpec.p1p1p1(d, e, f) for d in range(1, 10) for e in range(1, 10)
              for f in range(1, 10)]
    for spec in specs:
        fields = ["complex"]
        if spec.ambient is Ambient.P3 or (spec.ambient is Ambient.P1XP2 and spec.e % 4 == 0) \
                or (spec.ambient is Ambient.P1P1P1 and spec.e % 2 == 0):
            fields.append("real")
        yield spec, fields


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    return ok, detail


def criterion_1():
    t = time.perf_counter()
    bad = [s.label() for s in CURVES_1 if count_1nodal_curves(s) != closed_form_count(s)]
    el = time.perf_counter() - t
    return record(1, not bad and el < 10, f"{len(CURVES_1)} sizes, mismatches {bad}, {el:.1f}s")


def criterion_2():
    t = time.perf_counter()
    bad = [s.label() for s in CURVES_2 if count_real_1nodal(s) != closed_form_count(s)]
    el = time.perf_counter() - t
    return record(2, not bad and el < 30, f"{len(CURVES_2)} sizes, mismatches {bad}, {el:.1f}s")


def criterion_3():
    spec = DegreeSpec.p3(2)
    plans = list(enumerate_surface_floorplans(spec, 1))
    shapes = [(p.indices, p.germs[0].kind, p.germs[0].detail) for p in plans]
    want = [((1,), "left_string", "horizontal_edge"), ((2,), "weight2_end", "diagonal")]
    cx = total_counts(spec, 1)
    re = total_counts(spec, 1, "real", build_sign_vector(spec, 1, "all_plus"))
    ok = shapes == want and cx == 4 and re == 4
    return record(3, ok, f"plans {shapes}, complex {cx}, real {re}")


def criterion_4():
    t = time.perf_counter()
    got = {s.d: total_counts(s, 1) for s in SURFACES_4}
    el = time.perf_counter() - t
    ok = all(v == 4 * (d - 1) ** 3 for d, v in got.items()) and el < 300
    return record(4, ok, f"totals {got}, {el:.1f}s")


def criterion_5():
    t = time.perf_counter()
    bad, cells = [], 0
    for spec, fields in domain_5():
        for field in fields:
            signs = signs_for(spec, field)
            table = build_weight_table(spec, field, signs)
            for delta in range(4):
                cells += 1
                if dp_count(table, delta) != total_counts(spec, delta, field, signs, method="factored"):
                    bad.append((spec.label(), field, delta))
    el = time.perf_counter() - t
    return record(5, not bad and el < 900, f"{cells} cells, mismatches {bad[:5]}, {el:.1f}s")


def criterion_6():
    t = time.perf_counter()
    bad = [(a.value, f, k) for (a, f), c in LEADING.items() for k in range(6)
           if partition_identity(a, f, k) != c ** k / math.factorial(k)]
    el = time.perf_counter() - t
    return record(6, not bad and el < 1, f"six coefficients, delta 0..5, failures {bad}, {el:.3f}s")


GRIDS_7 = {"p3": [250, 500, 1000, 2000], "p1xp2": [252, 500, 1000, 2000],
           "p1p1p1": [252, 500, 1000, 2000]}


def criterion_7():
    t = time.perf_counter()
    bad = []
    for amb, grid in GRIDS_7.items():
        for field in ("complex", "real"):
            for delta in (1, 2, 3):
                rep = convergence_report(amb, field, delta, grid)
                if not (rep.monotone and rep.final_deviation < 0.1):
                    bad.append((amb, field, delta, [round(r.deviation, 4) for r in rep.rows]))
    el = time.perf_counter() - t
    return record(7, not bad and el < 120, f"18 series, failures {bad}, {el:.1f}s")


def criterion_8():
    _, _, _, curve, dec = fig.build()
    left, right = fig.portion(curve, dec)
    names = fig.named((0, 0))
    left_ok = [c.elements for c in left] == [{names[a], names[b]} for a, b in fig.LEFT_LABELS]
    right_ok = [c.elements for c in right] == [{names[a], names[b]} for a, b in fig.RIGHT_LABELS]
    _, factors = fig.alpha_factors(curve, dec)
    mu = mu_curve(dec)
    ok = left_ok and right_ok and factors == [2, 2] and mu == 4
    return record(8, ok, f"left floor labels {left_ok}, right floor labels {right_ok}, "
                         f"alpha factors {factors}, mu {mu}")


def criterion_9():
    t = time.perf_counter()
    bad, n = [], 0
    for spec in CURVES_1:
        points = default_points(spec, spec.point_count())
        for plan in enumerate_curve_floorplans(spec):
            n += 1
            c = compose_curve(plan, points)
            if not (c.is_balanced() and incidence_check(c, c.marks["points"])
                    and c.cell_area_sum() == c.newton_area()):
                bad.append((spec.label(), plan.key()))
        c = compose_curve(spec)
        n += 1
        if not (c.is_balanced() and incidence_check(c, c.marks["points"])
                and c.cell_area_sum() == c.newton_area()):
            bad.append((spec.label(), "smooth"))
    for spec in SURFACES_4:
        cache = {}
        for plan in enumerate_surface_floorplans(spec, 1):
            n += 1
            if not certify_surface(compose_surface(plan, cache=cache)).ok:
                bad.append((spec.label(), plan.key()))
    el = time.perf_counter() - t
    return record(9, not bad, f"{n} curves and surfaces, failures {bad[:5]}, {el:.1f}s")


def criterion_10():
    # plan multiplicities are products of germ multiplicities, all nonnegative, so
    # germ-wise dominance over every germ of the domain is plan-wise dominance
    bad, germs = [], 0
    for spec, fields in domain_5():
        if "real" not in fields:
            continue
        signs = signs_for(spec, "real")
        for i in range(1 if spec.ambient is Ambient.P3 else 0, spec.d + 1):
            for g in germs_at(spec, i):
                germs += 1
                r, c = germ_mult_real(spec, g, signs), germ_mult_complex(spec, g)
                if not 0 <= r <= c:
                    bad.append((spec.label(), g.key()))
    plans = 0
    for spec, delta in [(DegreeSpec.p3(6), 3), (DegreeSpec.p1xp2(5, 4), 2),
                        (DegreeSpec.p1p1p1(5, 2, 3), 2)]:
        signs = signs_for(spec, "real")
        for plan in enumerate_surface_floorplans(spec, delta):
            plans += 1
            if surface_mult_real(plan, signs) > surface_mult_complex(plan):
                bad.append((spec.label(), plan.key()))
    return record(10, not bad, f"{germs} germs, {plans} streamed plans, violations {bad[:5]}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    assert ok, detail


def summary_lines():
    return [f"criterion {n}: {'PASS' if RESULTS[n][0] else 'FAIL'} ({RESULTS[n][1]})"
            for n in sorted(RESULTS)]


if __name__ == "__main__":
    for crit in CRITERIA:
        crit()
    print("\n".join(summary_lines()))
