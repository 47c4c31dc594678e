"""Tests for the simple random normed space construction."""

import random

import numpy as np
import pytest

from pph.distfn import EPSILON_ZERO, make_step, pointwise_equal, unit_step
from pph.errors import (
    DimensionMismatch,
    DomainViolation,
    InsufficientProbes,
    RangeViolation,
)
from pph.pmspace import build
from pph.rnspace import (
    RNSpace,
    check_convexity_preservation,
    check_rn_axioms,
    induced_metric,
    nu,
)
from pph.triangle import CONVMIN, MIN, W, apply
from pph.distfn import leq

PLANE = RNSpace(2, unit_step(1.0), CONVMIN)
SPACE3 = RNSpace(3, unit_step(1.0), CONVMIN)
HALF_BASE = RNSpace(2, make_step([1, 3], [0.5, 1.0], 0.0), CONVMIN)


def random_noncollinear_int_pairs(rng, count, dim):
    pairs = []
    while len(pairs) < count:
        p = np.array([rng.randint(-9, 9) for _ in range(dim)], dtype=float)
        q = np.array([rng.randint(-9, 9) for _ in range(dim)], dtype=float)
        if not p.any() or not q.any():
            continue
        cross = np.linalg.norm(np.cross(p, q)) if dim == 3 else abs(
            p[0] * q[1] - p[1] * q[0]
        )
        if cross != 0.0:
            pairs.append((p, q))
    return pairs


# ── the random norm ────────────────────────────────────────────────


def test_zero_vector_maps_to_unit_step_at_zero():
    assert nu(PLANE, [0.0, 0.0]) == EPSILON_ZERO


def test_norm_scales_base_thresholds():
    assert nu(PLANE, [0.0, 2.0]) == unit_step(2.0)
    assert nu(HALF_BASE, [3.0, 4.0]) == make_step([5, 15], [0.5, 1.0], 0.0)


def test_scaling_law_is_exact_on_exact_norms():
    from pph.distfn import scale_thresholds

    p = [3.0, 4.0]  # norm 5, exactly representable
    doubled = nu(PLANE, [6.0, 8.0])
    assert doubled == unit_step(10.0)
    assert doubled == scale_thresholds(nu(PLANE, p), 2.0)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        nu(PLANE, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatch):
        RNSpace(0, unit_step(1.0), CONVMIN)


def test_improper_base_rejected():
    with pytest.raises(DomainViolation):
        RNSpace(2, make_step([1], [0.5], 0.0), CONVMIN)


# ── axioms ─────────────────────────────────────────────────────────


def test_axioms_pass_for_convolution_on_integer_probes():
    rng = random.Random(5)
    probes = [np.zeros(2)] + [
        p for p, _ in random_noncollinear_int_pairs(rng, 10, 2)
    ]
    rep = check_rn_axioms(PLANE, probes)
    assert rep.passed


def test_axioms_pass_in_three_dimensions():
    rng = random.Random(6)
    probes = [np.zeros(3)] + [
        p for p, _ in random_noncollinear_int_pairs(rng, 10, 3)
    ]
    rep = check_rn_axioms(SPACE3, probes)
    assert rep.passed


def test_axioms_pass_for_fractional_base():
    rng = random.Random(7)
    probes = [np.zeros(2)] + [
        p for p, _ in random_noncollinear_int_pairs(rng, 6, 2)
    ]
    assert check_rn_axioms(HALF_BASE, probes).passed


def test_pointwise_min_fails_triangle_axiom_noncollinear():
    space = RNSpace(2, unit_step(1.0), MIN)
    p, q = np.array([3.0, 0.0]), np.array([0.0, 4.0])
    # |p+q| = 5 > max(3, 4): the min of the two norms jumps too early
    bound = apply(MIN, nu(space, p), nu(space, q))
    assert not leq(bound, nu(space, p + q))
    rep = check_rn_axioms(space, [np.zeros(2), p, q])
    assert not rep.passed
    assert rep.witness[0] == "RN3"


def test_collinear_positive_multiples_also_fail_pointwise_min():
    # thresholds add along a ray, so the pointwise min still jumps too early
    space = RNSpace(2, unit_step(1.0), MIN)
    p = np.array([1.0, 0.0])
    bound = apply(MIN, nu(space, p), nu(space, 2 * p))
    assert not leq(bound, nu(space, 3 * p))


def test_probe_validation():
    with pytest.raises(InsufficientProbes):
        check_rn_axioms(PLANE, [np.zeros(2), np.ones(2)])
    with pytest.raises(InsufficientProbes):
        check_rn_axioms(PLANE, [np.ones(2), 2 * np.ones(2), 3 * np.ones(2)])


# ── induced distance ───────────────────────────────────────────────


def test_induced_distance_of_equal_points_is_maximal():
    assert induced_metric(PLANE, [1.0, 2.0], [1.0, 2.0]) == EPSILON_ZERO


def test_induced_distance_scales_with_separation():
    assert induced_metric(PLANE, [3.0, 4.0], [0.0, 0.0]) == unit_step(5.0)


def test_induced_distance_is_symmetric():
    rng = random.Random(9)
    for p, q in random_noncollinear_int_pairs(rng, 5, 2):
        assert induced_metric(PLANE, p, q) == induced_metric(PLANE, q, p)


def test_induced_distances_form_a_pm_space():
    pts = [np.zeros(2), np.array([3.0, 0.0]), np.array([0.0, 4.0]),
           np.array([-5.0, 12.0])]
    labels = [str(tuple(p)) for p in pts]
    matrix = [
        [induced_metric(PLANE, p, q) for q in pts] for p in pts
    ]
    space = build(labels, matrix, CONVMIN)
    assert space.size == 4


# ── convexity preservation ─────────────────────────────────────────


def test_single_point_hull_trials_pass():
    rep = check_convexity_preservation(
        PLANE, [[0.0, 0.0]], eps=0.3, trials=20, seed=1
    )
    assert rep.passed and rep.trials == 20


def test_segment_hull_trials_pass():
    rep = check_convexity_preservation(
        PLANE, [[0.0, 0.0], [1.0, 0.5]], eps=0.3, trials=50, seed=2
    )
    assert rep.passed
    assert rep.precondition.passed


def test_triangle_hull_trials_pass_both_levels():
    tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    for eps in (0.1, 0.3):
        rep = check_convexity_preservation(PLANE, tri, eps=eps, trials=50, seed=3)
        assert rep.passed, rep.failures[:1]


def test_fractional_base_trials_pass():
    rep = check_convexity_preservation(
        HALF_BASE, [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]], eps=0.6,
        trials=30, seed=4,
    )
    assert rep.passed


def test_precondition_failure_blocks_trials():
    space = RNSpace(2, unit_step(1.0), W)
    rep = check_convexity_preservation(
        space, [[0.0, 0.0], [1.0, 0.0]], eps=0.3, trials=10, seed=5
    )
    assert not rep.passed
    assert not rep.precondition.passed
    assert rep.trials == 0


def test_trials_deterministic_given_seed():
    tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    a = check_convexity_preservation(PLANE, tri, eps=0.3, trials=10, seed=7)
    b = check_convexity_preservation(PLANE, tri, eps=0.3, trials=10, seed=7)
    assert a == b


def test_convexity_argument_validation():
    with pytest.raises(RangeViolation):
        check_convexity_preservation(PLANE, [[0.0, 0.0]], eps=1.5, trials=5, seed=0)
    with pytest.raises(RangeViolation):
        check_convexity_preservation(PLANE, [[0.0, 0.0]], eps=0.3, trials=0, seed=0)
