"""Left-continuous step distribution functions and their order/metric algebra.

The whole package works with the class of nondecreasing, left-continuous step
functions on the extended reals with values in [0, 1], extended by F(-inf) = 0
and F(+inf) = 1.  This class is closed under every operation used downstream
(pointwise sup/inf, t-norm images, sup-min convolution), and pointwise
predicates over finitely many step functions are decidable exactly on a finite
probe grid.

Fixed vocabulary used throughout:

* distance function: a distribution function vanishing on (-inf, 0]
  (``in_delta_plus``); the "proper" subclass whose value reaches 1 is
  ``in_d_plus``.
* ``EPSILON_ZERO``: the unit step at 0, the maximal distance function.
* ``EPSILON_INF``: the function that is 0 at every finite argument, the
  minimal distance function (its value 1 at +inf is not attained).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyFamily,
    LengthMismatch,
    MonotonicityViolation,
    NegativeThreshold,
    NonPositiveTolerance,
    RangeViolation,
    UnsortedBreakpoints,
)

#: Absolute tolerance for comparing probability values.
PROB_TOL = 1e-12

#: Upper end of the Levy bisection bracket.  Every band inequality is slack at
#: h = 2 because probabilities live in [0, 1]; asserted on every call.
LEVY_BRACKET_HIGH = 2.0

#: Default bisection tolerance for the Levy distance.
LEVY_DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class DistributionFn:
    """A nondecreasing, left-continuous step function on the extended reals.

    ``base_value`` is the value on ``(-inf, breakpoints[0]]`` and ``values[i]``
    is the value on ``(breakpoints[i], breakpoints[i+1]]`` (the last interval
    extends to +inf).  Evaluation at a breakpoint therefore returns the value
    of the segment to its *left*.  The value at -inf is 0 and at +inf is 1
    regardless of the finite data.

    Instances are canonical: a breakpoint whose value equals the value of the
    preceding segment carries no jump and is dropped at construction time.
    Structural equality of two instances is thus the same as pointwise
    equality of the functions they represent.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    base_value: float = 0.0

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        base = float(self.base_value)
        if len(bps) != len(vals):
            raise LengthMismatch(
                f"{len(bps)} breakpoints vs {len(vals)} values"
            )
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise UnsortedBreakpoints(f"breakpoints not strictly increasing: {bps}")
        if any(not math.isfinite(b) for b in bps):
            raise UnsortedBreakpoints("breakpoints must be finite")
        for v in (base, *vals):
            if not 0.0 <= v <= 1.0:
                raise RangeViolation(f"value {v} outside [0, 1]")
        prev = base
        for v in vals:
            if v < prev:
                raise MonotonicityViolation(f"values decrease: {prev} -> {v}")
            prev = v
        # Canonical form: drop breakpoints that carry no jump.
        kept_b, kept_v = [], []
        prev = base
        for b, v in zip(bps, vals):
            if v != prev:
                kept_b.append(b)
                kept_v.append(v)
                prev = v
        object.__setattr__(self, "breakpoints", tuple(kept_b))
        object.__setattr__(self, "values", tuple(kept_v))
        object.__setattr__(self, "base_value", base)

    @property
    def at_infinity(self) -> float:
        """The conventional value at +inf (always 1)."""
        return 1.0

    @property
    def final_value(self) -> float:
        """The value on the last finite segment (limit at +inf from below)."""
        return self.values[-1] if self.values else self.base_value

    def eval(self, x: float) -> float:
        """Evaluate at ``x``; left-continuous at jumps, 0 at -inf, 1 at +inf."""
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        i = bisect_left(self.breakpoints, x)
        return self.base_value if i == 0 else self.values[i - 1]

    def eval_many(self, xs) -> np.ndarray:
        """Vectorized :meth:`eval` over an array of finite or infinite reals."""
        xs = np.asarray(xs, dtype=float)
        ext = np.array([self.base_value, *self.values])
        idx = np.searchsorted(np.array(self.breakpoints), xs, side="left")
        out = ext[idx]
        out = np.where(np.isneginf(xs), 0.0, out)
        out = np.where(np.isposinf(xs), 1.0, out)
        return out

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def in_delta_plus(self) -> bool:
        """Whether the function vanishes on (-inf, 0] (is a distance function)."""
        if self.base_value != 0.0:
            return False
        return not self.breakpoints or self.breakpoints[0] >= 0.0

    def in_d_plus(self) -> bool:
        """Whether this is a proper distance function (value reaches 1)."""
        return self.in_delta_plus() and abs(self.final_value - 1.0) <= PROB_TOL


@dataclass(frozen=True)
class RawStepData:
    """A nondecreasing step function whose values at jumps are unconstrained.

    ``open_values[i]`` is the value on the i-th open interval between
    breakpoints (with ``open_values[0]`` on ``(-inf, b_0)`` and the last on
    ``(b_last, +inf)``), and ``at_values[i]`` is the value attained *at*
    ``breakpoints[i]``.  Monotonicity forces
    ``open_values[i] <= at_values[i] <= open_values[i+1]``.

    This is the natural output shape of a pointwise infimum, which need not be
    left-continuous; :func:`left_regularize` restores left-continuity.
    """

    breakpoints: tuple[float, ...]
    open_values: tuple[float, ...]
    at_values: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        opens = tuple(float(v) for v in self.open_values)
        ats = tuple(float(v) for v in self.at_values)
        if len(opens) != len(bps) + 1 or len(ats) != len(bps):
            raise LengthMismatch(
                f"expected {len(bps) + 1} open values and {len(bps)} at-values"
            )
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise UnsortedBreakpoints(f"breakpoints not strictly increasing: {bps}")
        for v in (*opens, *ats):
            if not 0.0 <= v <= 1.0:
                raise RangeViolation(f"value {v} outside [0, 1]")
        for i, a in enumerate(ats):
            if not opens[i] <= a <= opens[i + 1]:
                raise MonotonicityViolation(
                    f"value {a} at breakpoint {bps[i]} breaks monotonicity"
                )
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "open_values", opens)
        object.__setattr__(self, "at_values", ats)

    def eval(self, x: float) -> float:
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        i = bisect_left(self.breakpoints, x)
        if i < len(self.breakpoints) and self.breakpoints[i] == x:
            return self.at_values[i]
        return self.open_values[i]

    @classmethod
    def from_distribution(cls, f: DistributionFn) -> "RawStepData":
        """View a left-continuous step function as raw step data."""
        opens = (f.base_value, *f.values)
        ats = tuple(f.eval(b) for b in f.breakpoints)
        return cls(f.breakpoints, opens, ats)


def make_step(
    breakpoints: Sequence[float],
    values: Sequence[float],
    base_value: float = 0.0,
) -> DistributionFn:
    """Build a validated step function from jump locations and segment values."""
    return DistributionFn(tuple(breakpoints), tuple(values), base_value)


def unit_step(a: float) -> DistributionFn:
    """The step function that is 0 on (-inf, a] and 1 on (a, +inf)."""
    if a < 0:
        raise NegativeThreshold(f"threshold {a} < 0")
    return DistributionFn((float(a),), (1.0,), 0.0)


#: Unit step at 0; the maximal distance function and the identity of every
#: triangle function.
EPSILON_ZERO = unit_step(0.0)

#: Zero at every finite argument; the minimal distance function.  Its value 1
#: at +inf is not a limit of finite values, so it is not proper.
EPSILON_INF = DistributionFn((), (), 0.0)


def probe_points(*fns, positive_only: bool = True, extra: Iterable[float] = ()):
    """Exhaustive probe grid for pointwise predicates over step functions.

    Returns every breakpoint of every operand, one midpoint per open segment
    between consecutive breakpoints, and one point beyond each end.  Step
    functions are constant on the segments of this grid, so checking a
    pointwise predicate on the grid decides it everywhere (on x > 0 when
    ``positive_only``).
    """
    bps = sorted({float(b) for f in fns for b in f.breakpoints} | set(extra))
    pts = set(bps)
    for a, b in zip(bps, bps[1:]):
        pts.add(0.5 * (a + b))
    if bps:
        pts.add(bps[0] - 1.0)
        pts.add(bps[-1] + 1.0)
    pts.add(1.0)
    if positive_only:
        pts = {x for x in pts if x > 0.0}
    return sorted(pts)


def pointwise_equal(f: DistributionFn, g: DistributionFn, tol: float = PROB_TOL) -> bool:
    """Whether two step functions agree within ``tol`` at every probe point."""
    xs = np.array(probe_points(f, g, positive_only=False))
    return bool(np.all(np.abs(f.eval_many(xs) - g.eval_many(xs)) <= tol))


def _merged_extremum(fs: Sequence[DistributionFn], op) -> DistributionFn:
    grid = sorted({b for f in fs for b in f.breakpoints})
    if not grid:
        base = op([f.base_value for f in fs])
        return DistributionFn((), (), base)
    # Value on (grid[i], grid[i+1]] equals each member's value at the segment's
    # right end; the last segment is probed one unit past the last breakpoint.
    rights = np.array(grid[1:] + [grid[-1] + 1.0])
    seg = op(np.stack([f.eval_many(rights) for f in fs]), axis=0)
    base = op([f.eval(grid[0]) for f in fs])
    return DistributionFn(tuple(grid), tuple(float(v) for v in seg), float(base))


def sup_family(fs: Sequence[DistributionFn]) -> DistributionFn:
    """Pointwise supremum of a nonempty finite family."""
    if not fs:
        raise EmptyFamily("sup of empty family")
    if len(fs) == 1:
        return fs[0]
    return _merged_extremum(fs, lambda a, axis=None: np.max(a, axis=axis))


def inf_family(fs: Sequence[DistributionFn]) -> DistributionFn:
    """Pointwise infimum of a nonempty finite family, left-regularized.

    The raw pointwise infimum of finitely many left-continuous step functions
    is already left-continuous, so the regularization pass is a structural
    no-op here; it still runs, and the result is asserted equal to the raw
    infimum so that any future representation with right-attained jump values
    would be corrected rather than silently accepted.
    """
    if not fs:
        raise EmptyFamily("inf of empty family")
    if len(fs) == 1:
        return fs[0]
    raw = raw_inf(fs)
    reg = left_regularize(raw)
    direct = _merged_extremum(fs, lambda a, axis=None: np.min(a, axis=axis))
    assert reg == direct, "left regularization altered a finite infimum"
    return reg


def raw_inf(fs: Sequence[DistributionFn]) -> RawStepData:
    """Pointwise infimum of a family as raw step data (no regularization)."""
    if not fs:
        raise EmptyFamily("inf of empty family")
    grid = sorted({b for f in fs for b in f.breakpoints})
    if not grid:
        base = min(f.base_value for f in fs)
        return RawStepData((), (base,), ())
    rights = np.array(grid[1:] + [grid[-1] + 1.0])
    opens_tail = np.min(np.stack([f.eval_many(rights) for f in fs]), axis=0)
    at_vals = np.min(
        np.stack([f.eval_many(np.array(grid)) for f in fs]), axis=0
    )
    opens = (float(at_vals[0]),) + tuple(float(v) for v in opens_tail)
    return RawStepData(tuple(grid), opens, tuple(float(v) for v in at_vals))


def left_regularize(g) -> DistributionFn:
    """Replace a nondecreasing step function by its left-limit function.

    Accepts either :class:`RawStepData` (the value attained at each jump is
    discarded in favour of the left limit) or an already left-continuous
    :class:`DistributionFn` (returned unchanged; the operation is idempotent).
    The output is pointwise <= the input.
    """
    if isinstance(g, DistributionFn):
        return g
    if not isinstance(g, RawStepData):
        raise TypeError(f"cannot regularize {type(g).__name__}")
    return DistributionFn(g.breakpoints, g.open_values[1:], g.open_values[0])


def leq(f: DistributionFn, g: DistributionFn) -> bool:
    """The pointwise order on distance functions: f(x) <= g(x) for all x > 0.

    Decided exactly on the probe grid of the two operands.
    """
    xs = np.array(probe_points(f, g, positive_only=True))
    return bool(np.all(f.eval_many(xs) <= g.eval_many(xs)))


def _levy_feasible(f: DistributionFn, g: DistributionFn, h: float) -> bool:
    """Whether the two shifted-band inequalities hold throughout (-1/h, 1/h).

    Each band inequality, as a function of x, is left-continuous and piecewise
    constant with jumps only at breakpoints of f and g shifted by 0 or +-h.
    Its supremum over the *open* window is therefore attained on the candidate
    set {interior jump points} union {1/h}: the value on the segment ending at
    the right endpoint equals the left limit there, which evaluation at 1/h
    returns.  Endpoints of the window itself are excluded (strict inequality).
    """
    w = 1.0 / h
    cands = {w}
    for b in (*f.breakpoints, *g.breakpoints):
        for s in (b - h, b, b + h):
            if -w < s < w:
                cands.add(s)
    xs = np.array(sorted(cands))
    f_at = f.eval_many(xs)
    g_at = g.eval_many(xs)
    f_lo = f.eval_many(xs - h)
    f_hi = f.eval_many(xs + h)
    g_lo = g.eval_many(xs - h)
    g_hi = g.eval_many(xs + h)
    return bool(
        np.all(f_lo - h <= g_at)
        and np.all(g_at <= f_hi + h)
        and np.all(g_lo - h <= f_at)
        and np.all(f_at <= g_hi + h)
    )


def levy_distance(
    f: DistributionFn, g: DistributionFn, tol: float = LEVY_DEFAULT_TOL
) -> float:
    """Modified Levy distance between two distribution functions.

    The distance is the infimum of all h > 0 such that

        F(x-h) - h <= G(x) <= F(x+h) + h   and symmetrically in F, G

    for every x in the open window (-1/h, 1/h).  Feasibility of a given h is
    upward-monotone (enlarging h only loosens every constraint and shrinks the
    window), so the infimum is located by bisection on [0, 2]; h = 2 is always
    feasible and is asserted.  The returned value is the feasible bracket end,
    hence an over-approximation of the infimum by at most ``tol``.  The
    computation is symmetric in its arguments by construction.
    """
    if tol <= 0:
        raise NonPositiveTolerance(f"tol {tol} <= 0")
    lo, hi = 0.0, LEVY_BRACKET_HIGH
    assert _levy_feasible(f, g, hi), "bracket end h=2 must be feasible"
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _levy_feasible(f, g, mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class WeakConvergence:
    """Finite-prefix surrogate for weak convergence of a sequence.

    ``first_index`` is the smallest 1-based position from which every Levy
    distance to the limit stays below the tolerance through the end of the
    prefix, or ``None`` when the prefix never settles.
    """

    converged: bool
    first_index: int | None
    distances: tuple[float, ...]


def weak_converges(
    seq: Sequence[DistributionFn],
    f: DistributionFn,
    tol: float,
    levy_tol: float = LEVY_DEFAULT_TOL,
) -> WeakConvergence:
    """Whether d_L(seq[n], f) is eventually below ``tol`` within the prefix."""
    if tol <= 0:
        raise NonPositiveTolerance(f"tol {tol} <= 0")
    if not seq:
        raise EmptyFamily("empty sequence")
    dists = tuple(levy_distance(fn, f, levy_tol) for fn in seq)
    first = None
    for i in range(len(dists) - 1, -1, -1):
        if dists[i] < tol:
            first = i + 1
        else:
            break
    return WeakConvergence(first is not None, first, dists)


def scale_thresholds(f: DistributionFn, c: float) -> DistributionFn:
    """Rescale the argument axis: returns x -> f(x / c) for c > 0."""
    if c <= 0:
        raise RangeViolation(f"scale factor {c} must be positive")
    return DistributionFn(
        tuple(b * c for b in f.breakpoints), f.values, f.base_value
    )
