import itertools

import pytest
from hypothesis import given, strategies as st

import weight2_portion as fig
from conftest import curve_specs
from floorcount.curve_floorplans import closed_form_count, compose_curve, enumerate_curve_floorplans
from floorcount.model import DegreeSpec, SignVector, add_signs, build_sign_vector
from floorcount.plane_curves import compose_smooth, default_points
from floorcount.real_phase import (SIGNS, DecorationError, EdgeSignClass, assign_real_structure,
                                   count_real_1nodal, mu_alpha_X, mu_curve, plan_marks,
                                   propagate_vertex, real_multiplicity)

EPS = (0, 0)
E1, E2, E3 = (1, 0), (0, 1), (1, 1)


def cls(*elements):
    a, b = elements
    return EdgeSignClass(frozenset(elements), add_signs(a, b))


def test_propagate_examples():
    assert propagate_vertex(cls(EPS, E2), cls(EPS, E1)).elements == {E1, E2}
    with pytest.raises(DecorationError):
        propagate_vertex(cls(EPS, E1), cls(E2, E3))
    with pytest.raises(DecorationError):
        propagate_vertex(cls(EPS, E1), cls(EPS, E1))


intersecting_pairs = [(a, b) for a, b in itertools.product(
    [cls(*p) for p in itertools.combinations(SIGNS, 2)], repeat=2)
    if len(a.elements & b.elements) == 1]


@given(st.sampled_from(intersecting_pairs))
def test_propagate_commutes_and_inverts(pair):
    a, b = pair
    c = propagate_vertex(a, b)
    assert c.elements == propagate_vertex(b, a).elements
    assert propagate_vertex(a, c).elements == b.elements
    assert len(c.elements) == 2


def test_mu_alpha():
    assert mu_alpha_X(EdgeSignClass(frozenset({EPS}), (0, 0)), cls(EPS, E2)) == 2
    assert mu_alpha_X(EdgeSignClass(frozenset({E3}), (0, 0)), cls(EPS, E2)) == 0


@pytest.mark.parametrize("spec", [DegreeSpec.p2(3), DegreeSpec.p1p1(2, 3)], ids=str)
@given(data=st.data())
def test_smooth_curves_decorate_uniquely(spec, data):
    curve = compose_smooth(spec)
    signs = data.draw(st.lists(st.sampled_from(SIGNS), min_size=spec.smooth_point_count(),
                               max_size=spec.smooth_point_count()))
    dec = assign_real_structure(curve, list(zip(curve.marks["points"], signs)))
    assert len(dec.classes) == len(curve.edges)
    assert mu_curve(dec) == 1


@pytest.mark.parametrize("eps", SIGNS)
def test_portion_labels_match_forced_reading(eps):
    _, _, _, curve, dec = fig.build(eps)
    left, right = fig.portion(curve, dec)
    names = fig.named(eps, third_offset=(0, 1))
    assert [c.elements for c in left] == [{names[a], names[b]} for a, b in fig.LEFT_LABELS]
    assert [c.elements for c in right] == [{names[a], names[b]} for a, b in fig.RIGHT_LABELS]
    alpha, factors = fig.alpha_factors(curve, dec)
    assert dec.classes[alpha].elements == {eps}
    assert factors == [2, 2] and mu_curve(dec) == 4


def test_literal_third_sign_contradicts_the_marks():
    """With e3 = e + (1,1) the right floor's marked edge would need an even
    direction, but it collects three weight-1 elevators and alpha on top of
    a vertical down end, so its direction is odd."""
    _, _, _, curve, dec = fig.build()
    rclasses, rm = fig.floor_chain(curve, dec, 1)
    assert rclasses[0].generator == (0, 1)  # down end
    assert rclasses[rm].generator == (1, 1)
    literal = fig.named(EPS)
    assert {literal["e1"], literal["e3"]} != rclasses[rm].elements
    assert add_signs(literal["e1"], literal["e3"]) == (0, 1)


def test_portion_marks_have_the_stated_signs():
    plan, points, signs, curve, dec = fig.build()
    names = fig.named(EPS)
    got = [signs[t] for t in range(7, 13)]
    assert got == [names[n] for n in fig.MARK_SIGNS]


def test_breaking_containment_gives_zero():
    plan, points, signs, curve, dec = fig.build()
    alpha, _ = fig.alpha_factors(curve, dec)
    flipped = [(p, add_signs(s, (1, 1)) if curve.edge_at(p) == alpha else s)
               for p, s in plan_marks(plan, points, signs)]
    broken = assign_real_structure(curve, flipped)
    assert broken.classes[alpha].elements == {(1, 1)}
    assert mu_curve(broken) == 0


@pytest.mark.parametrize("spec", curve_specs(5, 3), ids=lambda s: s.label())
def test_block_signs_are_maximal(spec):
    assert count_real_1nodal(spec) == closed_form_count(spec)


def test_adversarial_signs_bounded():
    spec = DegreeSpec.p2(4)
    n = spec.point_count()
    points = default_points(spec, n)
    for seed in range(4):
        signs = SignVector(tuple(SIGNS[(seed * 7 + 3 * t * t) % 4] for t in range(n)), "adversarial")
        total = sum(real_multiplicity(p, signs, points) for p in enumerate_curve_floorplans(spec))
        assert 0 <= total <= 27


def test_all_plus_not_maximal_in_degree_four():
    spec = DegreeSpec.p2(4)
    allplus = build_sign_vector(spec, kind="all_plus")
    assert count_real_1nodal(spec, allplus) < closed_form_count(spec)


def test_decoration_json():
    _, _, _, curve, dec = fig.build()
    obj = dec.to_json()
    assert len(obj["edges"]) == len(curve.edges)
    assert all(isinstance(s, str) for rec in obj["edges"] for s in rec["signs"])


def test_plan_without_weight_two_has_multiplicity_one():
    spec = DegreeSpec.p2(4)
    signs = build_sign_vector(spec, kind="bertrand")
    for plan in enumerate_curve_floorplans(spec):
        if plan.defect.kind == "align":
            assert real_multiplicity(plan, signs) == 1
    assert compose_curve(plan) is not None
