from fractions import Fraction

import pytest

from floorcount.model import DegreeSpec, SignVector, build_sign_vector
from floorcount.plane_curves import NodeGerm
from floorcount.surface_floorplans import (RealPreconditionError, SurfaceFloorPlan, certify_surface,
                                           compose_surface, discriminant_degree,
                                           enumerate_surface_floorplans, germ_mult_complex,
                                           germ_mult_real, germs_at, index_tuples,
                                           surface_mult_complex, surface_mult_real, total_counts)

P3_2 = DegreeSpec.p3(2)


def test_degree_two_example():
    plans = list(enumerate_surface_floorplans(P3_2, 1))
    assert [(p.indices, p.germs[0].kind, p.germs[0].detail) for p in plans] == [
        ((1,), "left_string", "horizontal_edge"), ((2,), "weight2_end", "diagonal")]
    assert [surface_mult_complex(p) for p in plans] == [2, 2]
    assert [surface_mult_real(p) for p in plans] == [2, 2]
    assert total_counts(P3_2, 1) == 4
    assert total_counts(P3_2, 1, "real", build_sign_vector(P3_2, 1, "all_plus")) == 4


def test_degree_one_is_empty():
    assert list(enumerate_surface_floorplans(DegreeSpec.p3(1), 1)) == []


def test_index_separation():
    spec = DegreeSpec.p3(4)
    plans = list(enumerate_surface_floorplans(spec, 2))
    assert plans and all(p.indices[1] >= p.indices[0] + 2 for p in plans)
    assert all(1 <= i <= 4 for p in plans for i in p.indices)


@pytest.mark.parametrize("spec", [DegreeSpec.p3(d) for d in range(2, 8)]
                         + [DegreeSpec.p1xp2(d, e) for d in range(1, 5) for e in range(1, 5)]
                         + [DegreeSpec.p1p1p1(d, e, f) for d in range(1, 4) for e in range(1, 4)
                            for f in range(1, 4)], ids=lambda s: s.label())
def test_delta_one_totals_are_discriminant_degrees(spec):
    assert total_counts(spec, 1) == discriminant_degree(spec)


def test_p3_delta_one_closed_form():
    for d in range(2, 7):
        assert total_counts(DegreeSpec.p3(d), 1) == 4 * (d - 1) ** 3
    assert total_counts(DegreeSpec.p3(4), 1) == 108


def test_germ_multiplicity_examples():
    spec = DegreeSpec.p3(5)
    mid = next(g for g in germs_at(spec, 3) if g.kind == "weight2_midpoint")
    assert germ_mult_complex(spec, mid) == 8
    pa = next(g for g in germs_at(DegreeSpec.p3(7), 3)
              if g.kind == "parallelogram_a" and g.placement == (1, 1))
    assert germ_mult_real(DegreeSpec.p3(7), pa) == 2  # (3*3+2+2+2)(3-1)/2 = 15 is odd
    p1p2 = DegreeSpec.p1xp2(3, 4)
    diag = next(g for g in germs_at(p1p2, 1) if g.kind == "weight2_end" and g.detail == "diagonal")
    assert germ_mult_complex(p1p2, diag) == 8


def test_stream_and_factored_totals_agree():
    for spec, delta in [(DegreeSpec.p3(5), 2), (DegreeSpec.p1xp2(4, 4), 2),
                        (DegreeSpec.p1p1p1(4, 2, 3), 2), (DegreeSpec.p3(6), 3)]:
        for field in ("complex", "real"):
            signs = None
            if field == "real" and spec.ambient.value == "p1p1p1":
                signs = build_sign_vector(spec, delta, "special")
            assert total_counts(spec, delta, field, signs) == \
                total_counts(spec, delta, field, signs, method="factored")


def test_real_preconditions():
    with pytest.raises(RealPreconditionError):
        total_counts(DegreeSpec.p1xp2(3, 6), 1, "real")
    with pytest.raises(RealPreconditionError):
        total_counts(DegreeSpec.p1p1p1(3, 3, 2), 1, "real")
    with pytest.raises(RealPreconditionError):
        total_counts(DegreeSpec.p3(3), 1, "real", SignVector((), "p1p1p1_special", 0))


@pytest.mark.parametrize("spec,delta", [(DegreeSpec.p3(3), 1), (DegreeSpec.p3(4), 2),
                                        (DegreeSpec.p1xp2(2, 2), 1), (DegreeSpec.p1p1p1(2, 2, 2), 1)],
                         ids=str)
def test_composed_surfaces_certify(spec, delta):
    cache = {}
    for plan in enumerate_surface_floorplans(spec, delta):
        surf = compose_surface(plan, cache=cache)
        rep = certify_surface(surf)
        assert rep.ok, rep.details[:3]


def test_smooth_quadric():
    surf = compose_surface(SurfaceFloorPlan(P3_2, 0, (), ()))
    assert len(surf.points) == 9
    assert certify_surface(surf).ok


def test_certificate_rejects_perturbed_surface():
    plan = next(enumerate_surface_floorplans(P3_2, 1))
    surf = compose_surface(plan)
    surf.shifts[0] += Fraction(1, 7)
    surf.__dict__.pop("_poly", None)
    assert not certify_surface(surf).ok


def test_plan_json():
    plan = next(enumerate_surface_floorplans(P3_2, 1))
    obj = plan.to_json()
    assert obj["indices"] == [1] and obj["germs"][0]["alignment_target"] == [[1, 0], [1, 1]]
    assert isinstance(plan.germs[0], NodeGerm)


def test_index_tuples_count():
    # tuples of size k from n indices with gaps >= 2: C(n-k+1, k)
    from math import comb

    spec = DegreeSpec.p1p1p1(9, 2, 2)
    for k in range(4):
        assert len(list(index_tuples(spec, k))) == comb(10 - k + 1, k)
