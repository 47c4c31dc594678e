"""Random normed spaces over finite-dimensional real vectors.

The simple construction only: a proper distance profile ``base`` is attached
to the unit sphere, and the random norm of a vector p is the profile with its
thresholds rescaled by the Euclidean norm of p, i.e. x -> base(x / |p|); the
zero vector maps to the unit step at 0.  This satisfies the scaling law by
construction and, under the sup-min convolution, lifts the norm triangle
inequality to the random-norm axiom.

The convexity-preservation check samples the level dilation of a convex hull
and certifies that convex combinations of dilation points stay in the
dilation, via the Serstnev inequality and the scaling law.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distfn import (
    EPSILON_ZERO,
    DistributionFn,
    PROB_TOL,
    make_step,
    leq,
    probe_points,
    scale_thresholds,
)
from .errors import (
    DimensionMismatch,
    DomainViolation,
    InsufficientProbes,
    RangeViolation,
)
from .report import CheckReport
from .triangle import TriangleFn, apply, check_serstnev_inequality

#: Fractional-height profile used as a Serstnev-inequality witness: pointwise
#: kinds that fail the inequality are caught here even when the space's own
#: base profile is a unit step (on which every kind trivially passes).
SERSTNEV_WITNESS = make_step([1.0, 3.0], [0.5, 1.0], 0.0)

#: Default scalar grid for the scaling-law check.
SCALING_GRID = (-2.0, -1.0, 0.5, 3.0)


@dataclass(frozen=True)
class RNSpace:
    """A simple random normed space: dimension, base profile, triangle function.

    ``base`` must be a proper distance function.  Whether ``tau`` satisfies
    the Serstnev inequality is not enforced here; checks that depend on it
    probe it first and flag the failure in their report.
    """

    dimension: int
    base: DistributionFn
    tau: TriangleFn

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch(f"dimension {self.dimension} < 1")
        if not self.base.in_d_plus():
            raise DomainViolation("base profile must be a proper distance function")


def _as_vector(space: RNSpace, p) -> np.ndarray:
    v = np.asarray(p, dtype=float)
    if v.shape != (space.dimension,):
        raise DimensionMismatch(
            f"expected a vector of dimension {space.dimension}, got shape {v.shape}"
        )
    return v


def nu(space: RNSpace, p) -> DistributionFn:
    """Random norm of a vector: the base profile rescaled by its length."""
    v = _as_vector(space, p)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return EPSILON_ZERO
    return scale_thresholds(space.base, norm)


def induced_metric(space: RNSpace, p, q) -> DistributionFn:
    """The translation-invariant distance: random norm of the difference."""
    return nu(space, _as_vector(space, p) - _as_vector(space, q))


def _midpoint_close(f: DistributionFn, g: DistributionFn, tol: float = PROB_TOL) -> bool:
    # Compare two steps at segment midpoints and outside the breakpoint span;
    # agreement there pins equality up to ulp-level breakpoint placement.
    # Sliver segments (width at rounding scale) are skipped: their midpoints
    # sit between two jumps that differ only by norm-computation rounding.
    bps = sorted({*f.breakpoints, *g.breakpoints})
    if not bps:
        return abs(f.base_value - g.base_value) <= tol
    pts = [
        0.5 * (a + b)
        for a, b in zip(bps, bps[1:])
        if (b - a) > 1e-9 * max(1.0, abs(b))
    ]
    pts += [bps[0] - 1.0, bps[-1] + 1.0]
    return all(abs(f.eval(x) - g.eval(x)) <= tol for x in pts)


def check_rn_axioms(
    space: RNSpace,
    probes: Sequence,
    scaling_grid: Sequence[float] = SCALING_GRID,
) -> CheckReport:
    """Validate the three random-norm axioms on probe vectors.

    * only the zero vector maps to the unit step at 0 (among the probes);
    * scaling law on the scalar grid: nu(a p) equals nu(p) with thresholds
      rescaled by |a| (exact on the step representation, compared at segment
      midpoints to stay robust to ulp-level threshold rounding);
    * norm triangle axiom nu(p+q) >= tau(nu(p), nu(q)) on all probe pairs.
    """
    vectors = [_as_vector(space, p) for p in probes]
    if len(vectors) < 3:
        raise InsufficientProbes(f"need >= 3 probe vectors, got {len(vectors)}")
    if not any(np.linalg.norm(v) == 0.0 for v in vectors):
        raise InsufficientProbes("probe set must include the zero vector")
    for v in vectors:
        is_zero = float(np.linalg.norm(v)) == 0.0
        if (nu(space, v) == EPSILON_ZERO) != is_zero:
            return CheckReport("rn_axioms", False, witness=("RN1", tuple(v)))
    for v in vectors:
        if float(np.linalg.norm(v)) == 0.0:
            continue
        base_nu = nu(space, v)
        for a in scaling_grid:
            if a == 0.0:
                continue
            lhs = nu(space, a * v)
            rhs = scale_thresholds(base_nu, abs(a))
            if not _midpoint_close(lhs, rhs):
                return CheckReport(
                    "rn_axioms", False, witness=("RN2", tuple(v), a)
                )
    for v in vectors:
        for w in vectors:
            bound = apply(space.tau, nu(space, v), nu(space, w))
            if not leq(bound, nu(space, v + w)):
                return CheckReport(
                    "rn_axioms", False, witness=("RN3", tuple(v), tuple(w))
                )
    return CheckReport("rn_axioms", True, details={"probes": len(vectors)})


def _serstnev_precondition(space: RNSpace) -> CheckReport:
    pairs = [
        (space.base, space.base),
        (scale_thresholds(space.base, 2.0), scale_thresholds(space.base, 0.5)),
        (SERSTNEV_WITNESS, SERSTNEV_WITNESS),
    ]
    for f, g in pairs:
        rep = check_serstnev_inequality(space.tau, f, g)
        if not rep.passed:
            return rep
    return CheckReport("serstnev_inequality", True)


def _dilation_radius(space: RNSpace, eps: float, fallback: float) -> float:
    # nu(d)(eps) > 1-eps  <=>  base(eps / d) > 1-eps; the critical threshold
    # is the first base breakpoint whose level exceeds 1-eps.
    y_star = None
    for b, v in zip(space.base.breakpoints, space.base.values):
        if v > 1.0 - eps:
            y_star = b
            break
    if y_star is None or y_star <= 0.0:
        return fallback
    return eps / y_star


@dataclass(frozen=True)
class ConvexityTrialReport:
    """Outcome of the convexity-preservation trials.

    ``precondition`` carries the Serstnev-inequality probe result; when it
    fails, no trials run.  Each failure record holds the sampled witnesses.
    """

    passed: bool
    precondition: CheckReport
    trials: int
    failures: tuple


def check_convexity_preservation(
    space: RNSpace,
    a_vertices: Sequence,
    eps: float,
    trials: int,
    seed: int,
    max_proposals: int = 10_000,
) -> ConvexityTrialReport:
    """Randomized check that level dilations of convex hulls stay convex.

    Each trial samples two certified dilation points (a barycentric point of
    the hull plus a proposal accepted when its random-norm distance clears the
    level), a random convex weight, and asserts the inequality chain

        nu(combined witness - combined sample)(eps)
            >= min(nu(p1 - q1)(eps), nu(p2 - q2)(eps)) > 1 - eps,

    which certifies the combined sample lies in the dilation.  Deterministic
    given the seed; trial k uses seed + k.
    """
    if not 0 < eps < 1:
        raise RangeViolation(f"eps must be in (0, 1), got {eps}")
    if trials < 1:
        raise RangeViolation(f"trials must be positive, got {trials}")
    vertices = np.stack([_as_vector(space, v) for v in a_vertices])
    pre = _serstnev_precondition(space)
    if not pre.passed:
        return ConvexityTrialReport(False, pre, 0, ())

    lo = vertices.min(axis=0)
    hi = vertices.max(axis=0)
    span = float(np.max(hi - lo))
    radius = _dilation_radius(space, eps, fallback=span + 1.0)
    lo = lo - radius
    hi = hi + radius

    def sample_certified(rng):
        for _ in range(max_proposals):
            weights = rng.dirichlet(np.ones(len(vertices)))
            p = weights @ vertices
            q = rng.uniform(lo, hi)
            if nu(space, p - q).eval(eps) > 1.0 - eps:
                return p, q
        raise RuntimeError(
            f"rejection sampling exhausted {max_proposals} proposals"
        )

    failures = []
    for k in range(trials):
        rng = np.random.default_rng(seed + k)
        p1, q1 = sample_certified(rng)
        p2, q2 = sample_certified(rng)
        t1 = float(rng.uniform(0.0, 1.0))
        t2 = 1.0 - t1
        combo_margin = nu(
            space, t1 * p1 + t2 * p2 - (t1 * q1 + t2 * q2)
        ).eval(eps)
        pair_margin = min(
            nu(space, p1 - q1).eval(eps), nu(space, p2 - q2).eval(eps)
        )
        chain_holds = combo_margin >= pair_margin - PROB_TOL
        in_dilation = combo_margin > 1.0 - eps
        if not (chain_holds and in_dilation):
            failures.append(
                {
                    "trial": k,
                    "t1": t1,
                    "q1": tuple(q1),
                    "q2": tuple(q2),
                    "witness1": tuple(p1),
                    "witness2": tuple(p2),
                    "combo_margin": combo_margin,
                    "pair_margin": pair_margin,
                }
            )
    return ConvexityTrialReport(not failures, pre, trials, tuple(failures))
