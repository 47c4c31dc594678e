"""Finite probabilistic metric spaces: construction, axioms, strong topology.

A space is a finite carrier of labels, a symmetric matrix of distance
functions (entry (p, q) plays the role of the probabilistic distance between
p and q), and a triangle function.  The four axioms validated by
:func:`build`:

* PM1 - the diagonal is the unit step at 0;
* PM2 - no off-diagonal entry equals the unit step at 0;
* PM3 - the matrix is symmetric;
* PM4 - for all p, q, r:  entry(p, r) >= tau(entry(p, q), entry(q, r)).

Everything downstream (neighborhoods, Cauchy prefixes, the Hausdorff
machinery) queries the space through :meth:`PMSpace.entry`.
"""

from __future__ import annotations

import itertools
import math
import random
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distfn import (
    EPSILON_ZERO,
    DistributionFn,
    LEVY_DEFAULT_TOL,
    levy_distance,
    leq,
    make_step,
    unit_step,
)
from .errors import (
    AxiomViolation,
    LengthMismatch,
    NonPositiveTolerance,
    NotAMetric,
    RangeViolation,
    UnknownPoint,
)
from .triangle import CONVMIN, TriangleFn, apply


@dataclass(frozen=True)
class PMSpace:
    """A validated finite probabilistic metric space.

    Construct through :func:`build`, :func:`from_metric` or
    :func:`from_samples`; direct instantiation skips axiom validation.
    """

    points: tuple
    dist: tuple
    tau: TriangleFn

    def index(self, p) -> int:
        try:
            return self.points.index(p)
        except ValueError:
            raise UnknownPoint(f"{p!r} is not a carrier point") from None

    def entry(self, p, q) -> DistributionFn:
        """The distance function attached to the pair (p, q)."""
        return self.dist[self.index(p)][self.index(q)]

    @property
    def size(self) -> int:
        return len(self.points)


def _iter_triples(n: int, max_triples, seed: int):
    total = n**3
    if max_triples is None or total <= max_triples:
        return itertools.product(range(n), repeat=3)
    warnings.warn(
        f"PM4 validation sampled: {max_triples} of {total} triples",
        stacklevel=3,
    )
    rng = random.Random(seed)
    seen = sorted(
        {
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(max_triples)
        }
    )
    return iter(seen)


def build(
    points: Sequence,
    dist: Sequence[Sequence[DistributionFn]],
    tau: TriangleFn,
    max_triples: int | None = None,
    sample_seed: int = 0,
) -> PMSpace:
    """Validate the four axioms and assemble the space.

    PM4 is checked exhaustively over all ordered triples in lexicographic
    order (first witness reported); ``max_triples`` switches to deterministic
    sampling with a warning when the carrier is large.
    """
    pts = tuple(points)
    n = len(pts)
    if n < 1:
        raise RangeViolation("carrier must contain at least one point")
    if len(set(pts)) != n:
        raise RangeViolation("duplicate carrier labels")
    if len(dist) != n or any(len(row) != n for row in dist):
        raise LengthMismatch(f"distance matrix must be {n}x{n}")
    matrix = tuple(tuple(row) for row in dist)
    for row in matrix:
        for f in row:
            if not isinstance(f, DistributionFn) or not f.in_delta_plus():
                raise AxiomViolation(
                    "domain", f, "matrix entries must be distance functions"
                )
    for i in range(n):
        if matrix[i][i] != EPSILON_ZERO:
            raise AxiomViolation("PM1", (pts[i],))
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise AxiomViolation("PM3", (pts[i], pts[j]))
    for i in range(n):
        for j in range(n):
            if i != j and matrix[i][j] == EPSILON_ZERO:
                raise AxiomViolation("PM2", (pts[i], pts[j]))
    for i, j, k in _iter_triples(n, max_triples, sample_seed):
        if not leq(apply(tau, matrix[i][j], matrix[j][k]), matrix[i][k]):
            raise AxiomViolation("PM4", (pts[i], pts[j], pts[k]))
    return PMSpace(pts, matrix, tau)


def from_metric(
    labels: Sequence,
    metric_matrix: Sequence[Sequence[float]],
    tau: TriangleFn = CONVMIN,
) -> PMSpace:
    """Embed an ordinary metric as unit steps at the pairwise distances.

    The matrix is validated first (symmetry, zero diagonal, positivity off
    the diagonal, triangle inequality - all with exact comparisons, so that
    the PM4 re-validation of the embedding cannot fail by rounding).
    """
    n = len(labels)
    d = [[float(v) for v in row] for row in metric_matrix]
    if len(d) != n or any(len(row) != n for row in d):
        raise LengthMismatch(f"metric matrix must be {n}x{n}")
    for i in range(n):
        if d[i][i] != 0.0:
            raise NotAMetric((labels[i], d[i][i]), "nonzero diagonal")
    for i in range(n):
        for j in range(n):
            if d[i][j] != d[j][i]:
                raise NotAMetric((labels[i], labels[j]), "asymmetric")
            if i != j and d[i][j] <= 0.0:
                raise NotAMetric(
                    (labels[i], labels[j]),
                    "distinct points at non-positive distance",
                )
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if d[i][k] > d[i][j] + d[j][k]:
                    raise NotAMetric(
                        (labels[i], labels[j], labels[k]),
                        "triangle inequality fails",
                    )
    matrix = [
        [EPSILON_ZERO if i == j else unit_step(d[i][j]) for j in range(n)]
        for i in range(n)
    ]
    return build(labels, matrix, tau)


def empirical_distance(diffs: Sequence[float]) -> DistributionFn:
    """Left-continuous empirical distribution of a list of distances.

    F(x) = (#observations strictly below x) / N; the strict inequality is
    what makes the step function left-continuous.
    """
    n = len(diffs)
    if n == 0:
        raise LengthMismatch("no observations")
    uniq = sorted(set(float(v) for v in diffs))
    counts = []
    running = 0
    for u in uniq:
        running += sum(1 for v in diffs if float(v) == u)
        counts.append(running / n)
    return make_step(uniq, counts, 0.0)


def from_samples(
    labels: Sequence,
    samples: Sequence[Sequence],
    tau: TriangleFn = CONVMIN,
) -> PMSpace:
    """Build the space of sampled random points (an E-space construction).

    ``samples[i]`` is a list of N coordinate vectors for label i; the entry
    for (p, q) is the empirical distribution of the Euclidean distance of the
    paired samples.  The diagonal is forced to the unit step at 0 and the
    axioms are re-validated; PM4 can genuinely fail for anti-aligned samples,
    in which case the violation is surfaced.
    """
    if len(samples) != len(labels):
        raise LengthMismatch("one sample list per label required")
    arrays = []
    for label, rows in zip(labels, samples):
        arr = np.atleast_2d(np.asarray(rows, dtype=float))
        if arr.ndim != 2:
            raise LengthMismatch(f"samples for {label!r} are not vectors")
        arrays.append(arr)
    n_samples = {a.shape[0] for a in arrays}
    dims = {a.shape[1] for a in arrays}
    if len(n_samples) != 1 or len(dims) != 1:
        raise LengthMismatch(
            f"sample counts {sorted(n_samples)} / dimensions {sorted(dims)} differ"
        )
    if next(iter(n_samples)) < 1:
        raise LengthMismatch("need at least one sample per label")
    n = len(labels)
    matrix = [[EPSILON_ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diffs = np.linalg.norm(arrays[i] - arrays[j], axis=1)
            f = empirical_distance(list(diffs))
            matrix[i][j] = f
            matrix[j][i] = f
    return build(labels, matrix, tau)


# ── strong topology ────────────────────────────────────────────────


@dataclass(frozen=True)
class Neighborhood:
    """A strong-topology neighborhood {q : entry(p,q)(t) > 1-t} (>= when closed)."""

    center: object
    t: float
    closed: bool
    members: tuple


def neighborhood(space: PMSpace, p, t: float, closed: bool = False) -> Neighborhood:
    """Strong neighborhood of ``p`` at level ``t``.

    For t > 1 (open) or t >= 1 (closed) this is the whole carrier, which the
    defining inequality yields by itself since values are nonnegative.
    """
    space.index(p)
    if t <= 0:
        raise RangeViolation(f"level t must be positive, got {t}")
    thr = 1.0 - t
    if closed:
        members = [q for q in space.points if space.entry(p, q).eval(t) >= thr]
    else:
        members = [q for q in space.points if space.entry(p, q).eval(t) > thr]
    return Neighborhood(p, t, closed, tuple(members))


@dataclass(frozen=True)
class CauchyPrefixReport:
    """Per-level verdicts for the Cauchy property of a sequence prefix.

    ``settle_indices[t]`` is the least 1-based n0 such that every pair at
    positions >= n0 within the prefix satisfies entry(t) > 1-t, or None.
    """

    passed: bool
    settle_indices: dict


def is_cauchy_prefix(
    space: PMSpace, seq: Sequence, t_grid: Sequence[float]
) -> CauchyPrefixReport:
    """Check the vicinity form of the Cauchy property on a finite prefix.

    A settle index must leave a tail of at least two positions; the trivial
    single-element tail would satisfy every level vacuously.
    """
    if len(seq) < 2:
        raise LengthMismatch("need a prefix of length >= 2")
    idx = [space.index(p) for p in seq]
    n = len(idx)
    settle = {}
    for t in t_grid:
        if t <= 0:
            raise RangeViolation(f"level t must be positive, got {t}")
        thr = 1.0 - t
        found = None
        for n0 in range(n - 1):
            ok = all(
                space.dist[idx[a]][idx[b]].eval(t) > thr
                for a in range(n0, n)
                for b in range(a, n)
            )
            if ok:
                found = n0 + 1
                break
        settle[float(t)] = found
    return CauchyPrefixReport(all(v is not None for v in settle.values()), settle)


@dataclass(frozen=True)
class ConvergenceReport:
    """Levy distances to the limit along a prefix, with the settle index."""

    passed: bool
    first_index: int | None
    distances: tuple


def converges_to(
    space: PMSpace,
    seq: Sequence,
    p,
    tol: float,
    levy_tol: float = LEVY_DEFAULT_TOL,
) -> ConvergenceReport:
    """Whether entry(seq[n], p) tends to the unit step at 0 within the prefix.

    Convergence in the strong topology is measured by the Levy distance to
    the unit step at 0 dropping below ``tol`` and staying there.
    """
    if tol <= 0:
        raise NonPositiveTolerance(f"tol {tol} <= 0")
    if not seq:
        raise LengthMismatch("empty sequence")
    space.index(p)
    dists = tuple(
        levy_distance(space.entry(q, p), EPSILON_ZERO, levy_tol) for q in seq
    )
    first = None
    for i in range(len(dists) - 1, -1, -1):
        if dists[i] < tol:
            first = i + 1
        else:
            break
    return ConvergenceReport(first is not None, first, dists)
