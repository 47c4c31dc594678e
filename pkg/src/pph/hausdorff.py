"""Point-set distance machinery on finite probabilistic metric spaces.

Implements, for nonempty subsets A, B of a finite carrier:

* the point-to-set distance  sup over q in B of entry(p, q);
* the excess of A over B  (left-regularized inf over p in A of the above);
* the probabilistic Pompeiu-Hausdorff distance  min of the two excesses;
* set diameter and boundedness;
* level dilations, closure via dilations, the two limit-set formulas for
  Hausdorff-convergent sequences of sets, and a greedy finite cover;
* checkers for the metric axioms of the set distance, the excess inequality
  chain, and proximity witness extraction.

Because the carrier is finite, every sup/inf is exact and the closure of a
set in the strong topology is the set itself; those formulas that the theory
states through limits are computed on user-supplied finite grids, and
reports state the grid-relative semantics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .distfn import (
    EPSILON_ZERO,
    DistributionFn,
    PROB_TOL,
    RawStepData,
    inf_family,
    left_regularize,
    leq,
    probe_points,
    raw_inf,
    sup_family,
)
from .errors import (
    EmptyFamily,
    EmptySet,
    PreconditionNotMet,
    RangeViolation,
    UnknownPoint,
)
from .pmspace import PMSpace, neighborhood
from .report import CheckReport
from .triangle import apply, check_sup_continuous


@dataclass(frozen=True)
class PointSet:
    """A nonempty subset of a space's carrier, stored sorted for determinism."""

    space: PMSpace
    members: tuple

    def __post_init__(self):
        if not self.members:
            raise EmptySet("point set must be nonempty")
        for p in self.members:
            self.space.index(p)
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def __contains__(self, p) -> bool:
        return p in self.members


def point_set(space: PMSpace, labels) -> PointSet:
    """Normalize a label collection (or pass through a PointSet)."""
    if isinstance(labels, PointSet):
        return labels
    return PointSet(space, tuple(labels))


def dist_point_set(space: PMSpace, p, b) -> DistributionFn:
    """Distance from a point to a set: pointwise sup of the entries into B."""
    b = point_set(space, b)
    return sup_family([space.entry(p, q) for q in b.members])


@dataclass(frozen=True)
class ExcessResult:
    """The excess of A over B before and after left regularization.

    ``gamma_raw`` is the raw pointwise infimum of the point-to-set distances;
    ``regularized`` is its left-limit regularization, pointwise <= the raw
    data.  For finite sets the regularization is a structural no-op, which is
    asserted on construction.
    """

    gamma_raw: RawStepData
    regularized: DistributionFn


def excess(space: PMSpace, a, b) -> ExcessResult:
    """Excess of A over B: regularized inf over p in A of dist_point_set(p, B)."""
    a = point_set(space, a)
    b = point_set(space, b)
    fams = [dist_point_set(space, p, b) for p in a.members]
    gamma = raw_inf(fams)
    reg = left_regularize(gamma)
    assert reg == inf_family(fams), "regularization must be a no-op on finite sets"
    return ExcessResult(gamma, reg)


def hausdorff_distance(space: PMSpace, a, b) -> DistributionFn:
    """Pointwise min of the two excesses; symmetric, entry-valued on singletons."""
    fab = excess(space, a, b).regularized
    fba = excess(space, b, a).regularized
    return inf_family([fab, fba])


def check_hausdorff_axioms(
    space: PMSpace, sets: Sequence, h_fn=None, check_precondition: bool = True
) -> CheckReport:
    """Validate the four metric axioms of the set distance over given sets.

    The triangle axiom of the lifted distance needs the triangle function to
    commute with finite sups, so that is spot-checked first on the families
    the lift actually uses (the rows into each set), unless disabled.
    ``h_fn`` allows a corrupted implementation to be injected as a negative
    control.
    """
    sets = [point_set(space, s) for s in sets]
    if h_fn is None:
        h_fn = hausdorff_distance
    if check_precondition:
        seen = set()
        g_probes = {f for row in space.dist for f in row}
        for b in sets:
            for p in space.points:
                fam = tuple(space.entry(p, q) for q in b.members)
                if fam in seen:
                    continue
                seen.add(fam)
                for g in g_probes:
                    rep = check_sup_continuous(space.tau, list(fam), g)
                    if not rep.passed:
                        return CheckReport(
                            "hausdorff_axioms",
                            False,
                            witness=("sup_continuity", p, b.members),
                            details={"discrepancy": rep.margin},
                        )
    cache = {}

    def h(x, y):
        key = (x.members, y.members)
        if key not in cache:
            val = h_fn(space, x, y)
            cache[key] = val
            cache[(y.members, x.members)] = val
        return cache[key]

    for a in sets:
        if h(a, a) != EPSILON_ZERO:
            return CheckReport("hausdorff_axioms", False, witness=("PM1", a.members))
    for a, b in itertools.combinations(sets, 2):
        hab = h(a, b)
        if h_fn(space, b, a) != hab:
            return CheckReport(
                "hausdorff_axioms", False, witness=("PM3", a.members, b.members)
            )
        if (hab == EPSILON_ZERO) != (a.members == b.members):
            return CheckReport(
                "hausdorff_axioms", False, witness=("PM2", a.members, b.members)
            )
    for a, b, c in itertools.product(sets, repeat=3):
        if not leq(apply(space.tau, h(a, b), h(b, c)), h(a, c)):
            return CheckReport(
                "hausdorff_axioms",
                False,
                witness=("PM4", a.members, b.members, c.members),
            )
    return CheckReport(
        "hausdorff_axioms", True, details={"sets": len(sets)}
    )


def check_point_set_inequalities(space: PMSpace, p, a, b) -> CheckReport:
    """Check the excess inequality chain and the triangle-style bound.

    Verifies pointwise on the probe grid:

    * tau(dist(p, A), excess(A, B)) <= dist(p, B);
    * dist(p, B) >= raw excess of A over B  (only meaningful when p is in A,
      skipped and flagged otherwise);
    * raw excess >= regularized excess >= set distance.
    """
    a = point_set(space, a)
    b = point_set(space, b)
    space.index(p)
    f_pb = dist_point_set(space, p, b)
    f_pa = dist_point_set(space, p, a)
    exc = excess(space, a, b)
    f_ab = hausdorff_distance(space, a, b)
    margins = {}

    tau_side = apply(space.tau, f_pa, exc.regularized)
    xs = probe_points(f_pb, tau_side, exc.regularized, f_ab, extra=exc.gamma_raw.breakpoints)
    margins["tau_bound"] = min(f_pb.eval(x) - tau_side.eval(x) for x in xs)
    if p in a:
        margins["point_above_raw_excess"] = min(
            f_pb.eval(x) - exc.gamma_raw.eval(x) for x in xs
        )
    margins["raw_above_regularized"] = min(
        exc.gamma_raw.eval(x) - exc.regularized.eval(x) for x in xs
    )
    margins["regularized_above_set_distance"] = min(
        exc.regularized.eval(x) - f_ab.eval(x) for x in xs
    )
    worst = min(margins.values())
    return CheckReport(
        "point_set_inequalities",
        worst >= -PROB_TOL,
        witness=(p, a.members, b.members),
        margin=worst,
        details={**margins, "point_in_a": p in a},
    )


@dataclass(frozen=True)
class WitnessMaps:
    """Total proximity maps at level s: each point to an s-close counterpart."""

    forward: dict
    backward: dict


def proximity_witnesses(space: PMSpace, a, b, s: float) -> WitnessMaps:
    """For each p in A, a q in B with entry(p,q)(s) > 1-s, and symmetrically.

    Requires the set distance to clear the level:  H(A,B)(s) > 1-s.  Under
    that hypothesis both maps are total (ties broken by smallest label);
    otherwise the hypothesis failure is raised.
    """
    a = point_set(space, a)
    b = point_set(space, b)
    if not 0 < s < 1:
        raise RangeViolation(f"level s must be in (0, 1), got {s}")
    h = hausdorff_distance(space, a, b)
    if not h.eval(s) > 1.0 - s:
        raise PreconditionNotMet(
            f"set distance at level {s} is {h.eval(s)} <= {1.0 - s}"
        )
    thr = 1.0 - s

    def pick(p, targets):
        for q in targets:
            if space.entry(p, q).eval(s) > thr:
                return q
        raise AssertionError("witness guaranteed by the level hypothesis")

    forward = {p: pick(p, b.members) for p in a.members}
    backward = {q: pick(q, a.members) for q in b.members}
    return WitnessMaps(forward, backward)


@dataclass(frozen=True)
class Diameter:
    """Set diameter (regularized inf of entries over pairs) and boundedness."""

    fn: DistributionFn
    bounded: bool


def diameter(space: PMSpace, a) -> Diameter:
    """Diameter of a set; bounded iff the final step value reaches 1."""
    a = point_set(space, a)
    fams = [
        space.entry(p, q) for p in a.members for q in a.members
    ]
    gamma = raw_inf(fams)
    fn = left_regularize(gamma)
    assert fn == inf_family(fams)
    return Diameter(fn, abs(fn.final_value - 1.0) <= PROB_TOL)


def dilate(space: PMSpace, a, eps: float) -> PointSet:
    """Level dilation: carrier points within level eps of some point of A."""
    a = point_set(space, a)
    if not 0 < eps <= 1:
        raise RangeViolation(f"eps must be in (0, 1], got {eps}")
    thr = 1.0 - eps
    members = [
        q
        for q in space.points
        if any(space.entry(p, q).eval(eps) > thr for p in a.members)
    ]
    return PointSet(space, tuple(members))


@dataclass(frozen=True)
class ClosureResult:
    """Intersection of dilations over a grid, with the stabilization level.

    ``stabilized_at`` is the first grid level (in the given order) at which
    the running intersection already equals the final result; ``stabilized``
    records whether the final result equals the set itself, which must
    happen on finite carriers once the grid reaches below the smallest
    positive distance scale.
    """

    closure: PointSet
    levels: tuple
    stabilized_at: float | None
    stabilized: bool


def closure_via_dilations(space: PMSpace, a, eps_grid: Sequence[float]) -> ClosureResult:
    """Approximate the strong closure of A by intersecting grid dilations."""
    a = point_set(space, a)
    if not eps_grid:
        raise EmptyFamily("empty eps grid")
    running = set(space.points)
    trace = []
    for eps in eps_grid:
        running &= set(dilate(space, a, eps).members)
        trace.append((float(eps), tuple(sorted(running))))
    final = tuple(sorted(running))
    stab_at = next((lv for lv, members in trace if members == final), None)
    closure = PointSet(space, final)
    return ClosureResult(closure, tuple(trace), stab_at, final == a.members)


def check_dilation_closure_bound(
    space: PMSpace, a, b, eps: float, closure_grid: Sequence[float] | None = None
) -> CheckReport:
    """Check: A inside the eps-dilation of B implies cl(A) inside the 2*eps one.

    For eps > 1/2 the 2*eps dilation is the whole carrier (every value is
    nonnegative, hence above the negative threshold), which the report notes
    as the trivial branch.
    """
    a = point_set(space, a)
    b = point_set(space, b)
    if not 0 < eps <= 1:
        raise RangeViolation(f"eps must be in (0, 1], got {eps}")
    if closure_grid is None:
        closure_grid = (0.5, 0.25, 0.1, 0.05, 0.01)
    hypothesis = set(a.members) <= set(dilate(space, b, eps).members)
    if not hypothesis:
        return CheckReport(
            "dilation_closure_bound",
            True,
            details={"hypothesis_holds": False, "branch": "vacuous"},
        )
    cl_a = closure_via_dilations(space, a, closure_grid).closure
    if 2 * eps > 1:
        target = set(space.points)
        branch = "whole_carrier"
    else:
        target = set(dilate(space, b, 2 * eps).members)
        branch = "dilation"
    ok = set(cl_a.members) <= target
    return CheckReport(
        "dilation_closure_bound",
        ok,
        witness=None if ok else tuple(sorted(set(cl_a.members) - target)),
        details={"hypothesis_holds": True, "branch": branch, "eps": eps},
    )


@dataclass(frozen=True)
class ChainResult:
    """A chain of points through a sequence of sets at dyadic proximity levels.

    ``indices[k]`` (1-based positions into the sequence) and ``points[k]``
    satisfy  entry(points[k], points[k+1])(levels[k]) > 1 - levels[k]  with
    ``levels[k] = t / 2**k`` starting at k = 0.  ``complete`` is True when the
    chain consumed the whole prefix; it is False when later positions remained
    but none of them established the next dyadic level, in which case
    ``stopped_level`` names that level (1-based).
    """

    points: tuple
    indices: tuple
    levels: tuple
    complete: bool
    stopped_level: int | None


def extract_cauchy_chain(
    space: PMSpace, sets: Sequence, t: float, start_index: int = 1
) -> ChainResult:
    """Extract a fast-converging chain of points through Hausdorff-close sets.

    Walks the sequence choosing positions n_1 < n_2 < ... such that from
    position n_{k+1} on, every pair of sets is within dyadic level t / 2**k
    (set distance above 1 minus the level), then picks the smallest-label
    point of the next set that is that close to the current point.  The
    choice is guaranteed to exist by the excess chain, and is asserted.
    """
    if not 0 < t < 0.5:
        raise RangeViolation(f"t must be in (0, 1/2), got {t}")
    sets = [point_set(space, s) for s in sets]
    n = len(sets)
    if not 1 <= start_index <= n:
        raise RangeViolation(f"start index {start_index} outside 1..{n}")

    cache = {}

    def h(i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in cache:
            cache[key] = hausdorff_distance(space, sets[key[0]], sets[key[1]])
        return cache[key]

    def tail_ok(i0, level):
        thr = 1.0 - level
        return all(
            h(i, j).eval(level) > thr
            for i in range(i0, n)
            for j in range(i, n)
        )

    if not tail_ok(start_index - 1, t):
        raise PreconditionNotMet(
            f"pairs from position {start_index} never clear level {t}", level=1
        )
    indices = [start_index]
    points = [sets[start_index - 1].members[0]]
    levels = []
    k = 1
    while True:
        next_level = t / 2**k
        pair_level = t / 2 ** (k - 1)
        if indices[-1] == n:  # prefix exhausted; natural termination
            return ChainResult(
                tuple(points), tuple(indices), tuple(levels), True, None
            )
        found = None
        for cand in range(indices[-1], n):  # 0-based candidate > current
            if tail_ok(cand, next_level):
                found = cand
                break
        if found is None:
            return ChainResult(
                tuple(points), tuple(indices), tuple(levels), False, k + 1
            )
        thr = 1.0 - pair_level
        prev = points[-1]
        nxt = next(
            (
                q
                for q in sets[found].members
                if space.entry(prev, q).eval(pair_level) > thr
            ),
            None,
        )
        assert nxt is not None, "chain step guaranteed by the excess chain"
        indices.append(found + 1)
        points.append(nxt)
        levels.append(pair_level)
        k += 1


@dataclass(frozen=True)
class LimitSetResult:
    """Both finite-prefix limit-set formulas and whether they agree.

    ``tail_closure_form`` intersects the closures of the tail unions over
    the prefix; ``dilation_form`` intersects, over the supplied eps grid,
    the union over n of the intersections of the tail dilations.  The tail
    start index stops one short of the prefix end (unless the prefix is a
    single set): a one-element tail carries no pairing information, mirroring
    the Cauchy settle convention.  All quantities are prefix- and
    grid-relative; for a Hausdorff-convergent input the two agree and equal
    the limit.  ``limit`` carries the tail closure form, which is nonempty
    for every input.
    """

    limit: PointSet
    tail_closure_form: tuple
    dilation_form: tuple
    agree: bool
    eps_grid: tuple


def limit_set(space: PMSpace, sets: Sequence, eps_grid: Sequence[float]) -> LimitSetResult:
    """Compute both limit-set formulas for a finite prefix of sets."""
    sets = [point_set(space, s) for s in sets]
    if not sets:
        raise EmptySet("empty sequence of sets")
    if not eps_grid:
        raise EmptyFamily("empty eps grid")
    n = len(sets)
    last_start = max(1, n - 1)  # exclude the vacuous one-element tail

    tail_closure = set(space.points)
    for i in range(last_start):
        union = set()
        for s in sets[i:]:
            union |= set(s.members)
        cl = closure_via_dilations(space, PointSet(space, tuple(union)), eps_grid)
        tail_closure &= set(cl.closure.members)

    dilation_form = set(space.points)
    for eps in eps_grid:
        union_over_n = set()
        for i in range(last_start):
            tail = set(space.points)
            for s in sets[i:]:
                tail &= set(dilate(space, s, eps).members)
            union_over_n |= tail
        dilation_form &= union_over_n

    a = tuple(sorted(tail_closure))
    b = tuple(sorted(dilation_form))
    return LimitSetResult(
        PointSet(space, a), a, b, a == b, tuple(float(e) for e in eps_grid)
    )


def finite_cover(space: PMSpace, a, eps: float) -> tuple:
    """Greedy cover of A by open level-eps neighborhoods of carrier points.

    Repeatedly takes the smallest uncovered point of A and the smallest-label
    carrier point whose neighborhood contains it (the point itself always
    qualifies).  Minimal under this greedy order, not globally minimal.
    """
    a = point_set(space, a)
    if not 0 < eps <= 1:
        raise RangeViolation(f"eps must be in (0, 1], got {eps}")
    uncovered = list(a.members)
    centers = []
    while uncovered:
        p = uncovered[0]
        z = next(
            q for q in space.points if p in neighborhood(space, q, eps).members
        )
        centers.append(z)
        covered = set(neighborhood(space, z, eps).members)
        uncovered = [q for q in uncovered if q not in covered]
    return tuple(centers)
