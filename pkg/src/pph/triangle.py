"""Triangle functions on distance functions, with checkers for their laws.

Four operations are provided, selected by kind name (the same names the CLI
uses):

* ``min``     - pointwise minimum t-norm
* ``w``       - pointwise Lukasiewicz t-norm  max(a + b - 1, 0)
* ``prod``    - pointwise product t-norm
* ``convmin`` - sup-min convolution  x -> sup_{u+v=x, u,v>=0} min(F(u), G(v))

All four map pairs of distance functions to distance functions, are
commutative, associative and monotone on the probe sets used here, and have
the unit step at 0 as identity.  The checkers accept either a
:class:`TriangleFn` or any callable ``(F, G) -> DistributionFn`` so that test
harnesses can feed deliberately broken operations as negative controls.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .distfn import (
    EPSILON_ZERO,
    DistributionFn,
    PROB_TOL,
    leq,
    pointwise_equal,
    probe_points,
    sup_family,
)
from .errors import DomainViolation, EmptyFamily, InsufficientProbes
from .report import CheckReport

KINDS = ("min", "w", "prod", "convmin")

_TNORMS = {
    "min": lambda a, b: np.minimum(a, b),
    "w": lambda a, b: np.maximum(a + b - 1.0, 0.0),
    "prod": lambda a, b: a * b,
}


@dataclass(frozen=True)
class TriangleFn:
    """A triangle function identified by kind name (see module docstring)."""

    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainViolation(
                f"unknown triangle function kind {self.kind!r}; expected one of {KINDS}"
            )

    def __call__(self, f: DistributionFn, g: DistributionFn) -> DistributionFn:
        return apply(self, f, g)


MIN = TriangleFn("min")
W = TriangleFn("w")
PROD = TriangleFn("prod")
CONVMIN = TriangleFn("convmin")


def _require_distance_fn(f: DistributionFn) -> None:
    if not f.in_delta_plus():
        raise DomainViolation(f"{f!r} is not a distance function")


def _pointwise(tnorm, f: DistributionFn, g: DistributionFn) -> DistributionFn:
    grid = sorted({*f.breakpoints, *g.breakpoints})
    if not grid:
        return DistributionFn((), (), float(tnorm(f.base_value, g.base_value)))
    rights = np.array(grid[1:] + [grid[-1] + 1.0])
    vals = tnorm(f.eval_many(rights), g.eval_many(rights))
    base = float(tnorm(f.eval(grid[0]), g.eval(grid[0])))
    return DistributionFn(tuple(grid), tuple(float(v) for v in vals), base)


def _conv_min(f: DistributionFn, g: DistributionFn) -> DistributionFn:
    # For step functions the sup-min convolution has the closed form
    #   h(x) = max{ min(fv_i, gv_j) : fb_i + gb_j < x }  (0 when no pair
    # qualifies), where fv_i is the value attained just after breakpoint fb_i.
    # Strict < gives left-continuity; jumps happen only at pairwise sums.
    if not f.breakpoints or not g.breakpoints:
        return DistributionFn((), (), 0.0)
    fb = np.array(f.breakpoints)
    gb = np.array(g.breakpoints)
    fv = np.array(f.values)
    gv = np.array(g.values)
    sums = np.add.outer(fb, gb).ravel()
    mins = np.minimum.outer(fv, gv).ravel()
    order = np.argsort(sums, kind="stable")
    sums = sums[order]
    mins = np.maximum.accumulate(mins[order])
    # collapse duplicate sums to the largest attainable level at each
    keep = np.append(sums[1:] != sums[:-1], True)
    return DistributionFn(
        tuple(float(s) for s in sums[keep]),
        tuple(float(v) for v in mins[keep]),
        0.0,
    )


@lru_cache(maxsize=65536)
def _apply_cached(kind: str, f: DistributionFn, g: DistributionFn) -> DistributionFn:
    if kind == "convmin":
        return _conv_min(f, g)
    return _pointwise(_TNORMS[kind], f, g)


def apply(tau, f: DistributionFn, g: DistributionFn) -> DistributionFn:
    """Apply a triangle function (or a raw callable) to two distance functions."""
    _require_distance_fn(f)
    _require_distance_fn(g)
    if isinstance(tau, TriangleFn):
        return _apply_cached(tau.kind, f, g)
    return tau(f, g)


def conv_min_at(f: DistributionFn, g: DistributionFn, x: float) -> float:
    """Pointwise sup-min convolution, evaluated independently of :func:`apply`.

    The supremum over splits u + v = x is piecewise constant in u with
    breakpoints where u crosses a breakpoint of f or x - u crosses one of g;
    it is computed exactly by probing those candidates, the endpoints, and
    the midpoints between consecutive candidates.
    """
    if x <= 0:
        return 0.0
    cands = {0.0, x}
    for b in f.breakpoints:
        if 0.0 <= b <= x:
            cands.add(float(b))
    for b in g.breakpoints:
        u = x - b
        if 0.0 <= u <= x:
            cands.add(float(u))
    us = sorted(cands)
    us += [0.5 * (a + b) for a, b in zip(us, us[1:])]
    return max(min(f.eval(u), g.eval(x - u)) for u in us)


def serstnev_lower_bound_at(
    f: DistributionFn, g: DistributionFn, x: float, t_grid_size: int = 16
) -> float:
    """The bound sup over t in [0,1] of min(f(t x), g((1-t) x), exactly.

    A uniform t grid of the requested size is refined with every t where
    ``t*x`` or ``(1-t)*x`` crosses a breakpoint, plus midpoints between
    consecutive candidates, which makes the supremum exact for step inputs.
    """
    if x <= 0:
        return 0.0
    ts = {i / (t_grid_size - 1) for i in range(t_grid_size)}
    for b in f.breakpoints:
        t = b / x
        if 0.0 <= t <= 1.0:
            ts.add(t)
    for b in g.breakpoints:
        t = 1.0 - b / x
        if 0.0 <= t <= 1.0:
            ts.add(t)
    ts = sorted(ts)
    ts += [0.5 * (a + b) for a, b in zip(ts, ts[1:])]
    return max(min(f.eval(t * x), g.eval((1.0 - t) * x)) for t in ts)


# ── checkers ───────────────────────────────────────────────────────


def check_identity_commutativity_monotonicity(
    tau, probes: Sequence[DistributionFn]
) -> CheckReport:
    """Check the algebraic triangle-function laws on a probe set.

    Verifies, over all probe pairs and triples: the unit step at 0 is an
    identity, commutativity, associativity, and monotonicity in each place
    for the order-comparable probe pairs.  Comparisons are pointwise within
    ``PROB_TOL``.
    """
    if len(probes) < 3:
        raise InsufficientProbes(f"need >= 3 probes, got {len(probes)}")
    for f in probes:
        if not pointwise_equal(apply(tau, f, EPSILON_ZERO), f):
            return CheckReport("triangle_laws", False, witness=("identity", f))
    for f in probes:
        for g in probes:
            if not pointwise_equal(apply(tau, f, g), apply(tau, g, f)):
                return CheckReport(
                    "triangle_laws", False, witness=("commutativity", f, g)
                )
    for f in probes:
        for g in probes:
            fg = apply(tau, f, g)
            for h in probes:
                lhs = apply(tau, fg, h)
                rhs = apply(tau, f, apply(tau, g, h))
                if not pointwise_equal(lhs, rhs):
                    return CheckReport(
                        "triangle_laws", False, witness=("associativity", f, g, h)
                    )
    comparable = [(a, b) for a in probes for b in probes if leq(a, b)]
    for f1, f2 in comparable:
        for g1, g2 in comparable:
            if not leq(apply(tau, f1, g1), apply(tau, f2, g2)):
                return CheckReport(
                    "triangle_laws",
                    False,
                    witness=("monotonicity", f1, f2, g1, g2),
                )
    return CheckReport("triangle_laws", True)


def check_sup_continuous(
    tau, family: Sequence[DistributionFn], g: DistributionFn
) -> CheckReport:
    """Check that tau commutes with the pointwise supremum of a finite family."""
    if not family:
        raise EmptyFamily("empty family")
    lhs = apply(tau, sup_family(list(family)), g)
    images = [apply(tau, f, g) for f in family]
    rhs = sup_family(images)
    xs = np.array(probe_points(lhs, rhs, *family, g, positive_only=False))
    disc = float(np.max(np.abs(lhs.eval_many(xs) - rhs.eval_many(xs))))
    return CheckReport(
        "sup_continuity", disc <= PROB_TOL, margin=disc,
        details={"family_size": len(family)},
    )


def check_lukasiewicz_bound(tau, f: DistributionFn, g: DistributionFn) -> CheckReport:
    """Check tau(F, G)(x) >= max(F(x) + G(x) - 1, 0) at every probe point.

    This lower bound by the pointwise Lukasiewicz combination is the side
    condition that powers the completeness arguments downstream.
    """
    res = apply(tau, f, g)
    xs = np.array(probe_points(f, g, res))
    margins = res.eval_many(xs) - np.maximum(f.eval_many(xs) + g.eval_many(xs) - 1.0, 0.0)
    worst = int(np.argmin(margins))
    return CheckReport(
        "lukasiewicz_bound",
        bool(margins[worst] >= -PROB_TOL),
        witness=float(xs[worst]),
        margin=float(margins[worst]),
    )


def check_serstnev_inequality(
    tau,
    f: DistributionFn,
    g: DistributionFn,
    t_grid_size: int = 16,
) -> CheckReport:
    """Check tau(F, G)(x) >= sup_t min(F(t x), G((1-t) x)) at every probe x > 0.

    The right side is evaluated by :func:`serstnev_lower_bound_at`, an
    independent route from the convolution used by ``apply``; for the
    ``convmin`` kind the two sides must agree exactly.  Probes include the
    pairwise breakpoint sums (the jumps of the right side) and their
    midpoints.
    """
    if t_grid_size < 2:
        raise InsufficientProbes(f"t_grid_size {t_grid_size} < 2")
    res = apply(tau, f, g)
    sums = {bf + bg for bf in f.breakpoints for bg in g.breakpoints}
    xs = probe_points(f, g, res, extra=sums)
    margins = [
        res.eval(x) - serstnev_lower_bound_at(f, g, x, t_grid_size) for x in xs
    ]
    worst = min(range(len(xs)), key=lambda i: margins[i])
    max_gap = max(abs(m) for m in margins)
    return CheckReport(
        "serstnev_inequality",
        margins[worst] >= -PROB_TOL,
        witness=xs[worst],
        margin=margins[worst],
        details={"max_abs_gap": max_gap},
    )
