"""Tests for the triangle-function operations and their law checkers."""

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pph.distfn import (
    EPSILON_ZERO,
    DistributionFn,
    leq,
    make_step,
    pointwise_equal,
    probe_points,
    unit_step,
)
from pph.errors import DomainViolation, EmptyFamily, InsufficientProbes
from pph.triangle import (
    CONVMIN,
    KINDS,
    MIN,
    PROD,
    TriangleFn,
    W,
    apply,
    check_identity_commutativity_monotonicity,
    check_lukasiewicz_bound,
    check_serstnev_inequality,
    check_sup_continuous,
    conv_min_at,
    serstnev_lower_bound_at,
)

from .oracles import conv_min_dense, random_proper_step, random_step

ALL_TAUS = [TriangleFn(k) for k in KINDS]

HALF = make_step([1, 3], [0.5, 1.0], 0.0)
QUARTER = make_step([0.5, 2], [0.25, 1.0], 0.0)


# ── apply ──────────────────────────────────────────────────────────


@pytest.mark.parametrize("tau", ALL_TAUS, ids=lambda t: t.kind)
def test_unit_step_at_zero_is_identity(tau):
    for f in (HALF, QUARTER, unit_step(2)):
        assert apply(tau, f, EPSILON_ZERO) == f
        assert apply(tau, EPSILON_ZERO, f) == f


def test_convolution_adds_unit_step_thresholds():
    assert apply(CONVMIN, unit_step(0.3), unit_step(0.4)) == unit_step(0.7)


def test_lukasiewicz_kind_on_unit_steps_takes_larger_threshold():
    assert apply(W, unit_step(1), unit_step(2)) == unit_step(2)


def test_apply_rejects_non_distance_functions():
    shifted = make_step([-1], [1.0], 0.0)
    with pytest.raises(DomainViolation):
        apply(MIN, shifted, EPSILON_ZERO)
    raised_base = make_step([1], [1.0], 0.5)
    with pytest.raises(DomainViolation):
        apply(CONVMIN, EPSILON_ZERO, raised_base)


def test_unknown_kind_rejected():
    with pytest.raises(DomainViolation):
        TriangleFn("lukasiewicz")


@pytest.mark.parametrize("tau", ALL_TAUS, ids=lambda t: t.kind)
def test_apply_stays_in_distance_class(tau):
    rng = random.Random(3)
    for _ in range(20):
        f = random_step(rng)
        g = random_step(rng)
        res = apply(tau, f, g)
        assert res.in_delta_plus()


def test_pointwise_kinds_stay_on_merged_grid():
    for tau in (MIN, W, PROD):
        res = apply(tau, HALF, QUARTER)
        assert set(res.breakpoints) <= set(HALF.breakpoints) | set(QUARTER.breakpoints)


def test_convolution_breakpoints_are_pairwise_sums():
    res = apply(CONVMIN, HALF, QUARTER)
    sums = {a + b for a in HALF.breakpoints for b in QUARTER.breakpoints}
    assert set(res.breakpoints) <= sums


def test_convolution_matches_independent_pointwise_route():
    rng = random.Random(5)
    for _ in range(15):
        f = random_step(rng, max_jumps=5)
        g = random_step(rng, max_jumps=5)
        res = apply(CONVMIN, f, g)
        sums = {a + b for a in f.breakpoints for b in g.breakpoints}
        for x in probe_points(f, g, res, extra=sums):
            assert res.eval(x) == conv_min_at(f, g, x)


def test_convolution_matches_dense_brute_force():
    f, g = HALF, QUARTER
    res = apply(CONVMIN, f, g)
    for x in (0.5, 1.0, 1.5, 1.75, 2.1, 3.0, 4.2, 5.5, 6.0):
        assert res.eval(x) == pytest.approx(conv_min_dense(f, g, x), abs=1e-9)


@given(
    st.integers(0, 16).map(lambda t: t / 4),
    st.integers(0, 16).map(lambda t: t / 4),
)
def test_convolution_threshold_additivity(a, b):
    assert apply(CONVMIN, unit_step(a), unit_step(b)) == unit_step(a + b)


def test_kind_ordering_lukasiewicz_below_product_below_min():
    rng = random.Random(9)
    for _ in range(20):
        f = random_step(rng)
        g = random_step(rng)
        assert leq(apply(W, f, g), apply(PROD, f, g))
        assert leq(apply(PROD, f, g), apply(MIN, f, g))


# ── law checker ────────────────────────────────────────────────────


@pytest.mark.parametrize("tau", ALL_TAUS, ids=lambda t: t.kind)
def test_laws_pass_on_unit_step_probes(tau):
    probes = [EPSILON_ZERO, unit_step(1), unit_step(2)]
    assert check_identity_commutativity_monotonicity(tau, probes).passed


@pytest.mark.parametrize("tau", ALL_TAUS, ids=lambda t: t.kind)
def test_laws_pass_on_fractional_probes(tau):
    probes = [EPSILON_ZERO, HALF, QUARTER, unit_step(1.5)]
    assert check_identity_commutativity_monotonicity(tau, probes).passed


def test_laws_reject_asymmetric_double():
    from pph.distfn import scale_thresholds

    def lopsided(f, g):
        # treats its second argument at half scale; asymmetric on purpose
        return apply(MIN, f, scale_thresholds(g, 2.0) if g.breakpoints else g)

    def first_only(f, g):
        return f  # ignores g entirely

    rep = check_identity_commutativity_monotonicity(
        first_only, [EPSILON_ZERO, unit_step(1), unit_step(2)]
    )
    assert not rep.passed
    assert rep.witness[0] in ("identity", "commutativity")
    rep2 = check_identity_commutativity_monotonicity(
        lopsided, [EPSILON_ZERO, unit_step(1), unit_step(2)]
    )
    assert not rep2.passed
    assert rep2.witness[0] == "commutativity"


def test_laws_need_three_probes():
    with pytest.raises(InsufficientProbes):
        check_identity_commutativity_monotonicity(MIN, [EPSILON_ZERO, HALF])


# ── sup continuity ─────────────────────────────────────────────────


def test_sup_continuity_on_unit_steps():
    rep = check_sup_continuous(MIN, [unit_step(1), unit_step(3)], unit_step(2))
    assert rep.passed and rep.margin == 0.0


def test_sup_continuity_convolution():
    rep = check_sup_continuous(
        CONVMIN, [unit_step(1), unit_step(3)], unit_step(2)
    )
    assert rep.passed


def test_sup_continuity_singleton_family():
    rep = check_sup_continuous(PROD, [HALF], QUARTER)
    assert rep.passed


def test_sup_continuity_empty_family_rejected():
    with pytest.raises(EmptyFamily):
        check_sup_continuous(MIN, [], EPSILON_ZERO)


@pytest.mark.parametrize("tau", ALL_TAUS, ids=lambda t: t.kind)
def test_sup_continuity_on_random_families(tau):
    rng = random.Random(17)
    for _ in range(10):
        family = [random_proper_step(rng) for _ in range(rng.randint(1, 4))]
        g = random_proper_step(rng)
        assert check_sup_continuous(tau, family, g).passed


# ── Lukasiewicz lower bound ────────────────────────────────────────


@pytest.mark.parametrize("tau", (MIN, W, PROD), ids=lambda t: t.kind)
def test_lukasiewicz_bound_holds_for_pointwise_kinds(tau):
    rng = random.Random(23)
    for _ in range(20):
        f = random_step(rng)
        g = random_step(rng)
        assert check_lukasiewicz_bound(tau, f, g).passed


def test_lukasiewicz_bound_fails_for_convolution():
    # The convolution sees F and G at split points below x, never at x itself,
    # so it cannot dominate the pointwise Lukasiewicz combination: already on
    # unit steps, conv gives the threshold sum while the bound jumps at the max.
    rep = check_lukasiewicz_bound(CONVMIN, unit_step(1), unit_step(2))
    assert not rep.passed
    assert 2.0 < rep.witness <= 3.0
    assert rep.margin == -1.0


def test_lukasiewicz_bound_fails_for_drastic_product():
    def drastic(f, g):
        # t-norm that is 0 unless one argument is 1; harness-only control
        grid = sorted({*f.breakpoints, *g.breakpoints})
        rights = grid[1:] + [grid[-1] + 1.0]
        vals = []
        for x in rights:
            a, b = f.eval(x), g.eval(x)
            vals.append(min(a, b) if max(a, b) == 1.0 else 0.0)
        return make_step(grid, vals, 0.0)

    f = make_step([1], [0.6], 0.0)
    rep = check_lukasiewicz_bound(drastic, f, f)
    assert not rep.passed
    assert rep.margin == pytest.approx(-0.2)


# ── Serstnev inequality ────────────────────────────────────────────


def test_serstnev_convolution_is_equality():
    for f, g in ((unit_step(0.3), unit_step(0.4)), (HALF, QUARTER), (HALF, HALF)):
        rep = check_serstnev_inequality(CONVMIN, f, g)
        assert rep.passed
        assert rep.details["max_abs_gap"] == 0.0


def test_serstnev_lower_bound_matches_convolution_pointwise():
    # the bound rewritten through u = t x is exactly the sup-min convolution
    rng = random.Random(29)
    for _ in range(10):
        f = random_step(rng, max_jumps=4)
        g = random_step(rng, max_jumps=4)
        for x in (0.6, 1.3, 2.9, 5.0):
            assert serstnev_lower_bound_at(f, g, x) == conv_min_at(f, g, x)


def test_serstnev_fails_for_pointwise_lukasiewicz_on_half_steps():
    rep = check_serstnev_inequality(W, HALF, HALF)
    assert not rep.passed
    # at x = 2.5 the bound reaches 0.5 via the even split while W gives 0
    assert rep.margin <= -0.5 + 1e-12


def test_serstnev_fails_for_pointwise_product_on_half_steps():
    rep = check_serstnev_inequality(PROD, HALF, HALF)
    assert not rep.passed


def test_serstnev_passes_for_pointwise_min():
    rng = random.Random(31)
    for _ in range(10):
        f = random_step(rng)
        g = random_step(rng)
        assert check_serstnev_inequality(MIN, f, g).passed


def test_serstnev_identity_probe_passes_every_kind():
    for tau in ALL_TAUS:
        rep = check_serstnev_inequality(tau, EPSILON_ZERO, HALF)
        assert rep.passed


def test_serstnev_grid_size_validation():
    with pytest.raises(InsufficientProbes):
        check_serstnev_inequality(MIN, HALF, HALF, t_grid_size=1)
