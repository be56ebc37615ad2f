"""Point solvers for the four classical mean value identities.

Each solver multiplies its identity through into a residual with no
denominators, scans the interval, and polishes sign changes. Hypotheses are
evaluated and reported on the results but never enforced: the search runs
regardless, since the identities frequently hold without their sufficient
hypotheses.
"""

from __future__ import annotations

import math

from .expr import Expr, compile_fn, differentiate
from .numerics import (
    DEFAULT_CONFIG, DomainError, Interval, PointResult, SolverConfig, TheoremId,
    differentiable_on_interior, grid_points, integrate, solve_residual,
)

__all__ = [
    "rolle_points", "rolle_hypothesis", "lagrange_points",
    "cauchy_points", "integral_mvt_points",
]


def rolle_hypothesis(f: Expr, iv: Interval, cfg: SolverConfig | None = None) -> bool | None:
    """Whether f(a) = f(b) within tolerance (None if an endpoint blows up)."""
    cfg = cfg or DEFAULT_CONFIG
    fc = compile_fn(f)
    fa, fb = fc(iv.a), fc(iv.b)
    if not (math.isfinite(fa) and math.isfinite(fb)):
        return None
    return abs(fa - fb) <= cfg.residual_tol * max(1.0, abs(fa), abs(fb))


def rolle_points(f: Expr, iv: Interval, cfg: SolverConfig | None = None) -> list[PointResult]:
    """Interior zeros of f'. Reported whether or not f(a) = f(b) holds."""
    cfg = cfg or DEFAULT_CONFIG
    d1 = compile_fn(differentiate(f))
    hyp = rolle_hypothesis(f, iv, cfg)
    return solve_residual(d1, iv, cfg, TheoremId.ROLLE, terms=(d1,), hypothesis=hyp)


def lagrange_points(f: Expr, iv: Interval, cfg: SolverConfig | None = None) -> list[PointResult]:
    """Points where f' equals the secant slope over [a, b].

    The hypothesis flag reports interior differentiability (grid test);
    linear f makes the residual vanish identically and is reported as
    degenerate.
    """
    cfg = cfg or DEFAULT_CONFIG
    fc = compile_fn(f)
    fa, fb = fc(iv.a), fc(iv.b)
    if not (math.isfinite(fa) and math.isfinite(fb)):
        raise DomainError("f must evaluate finite at the interval endpoints")
    slope = (fb - fa) / iv.width
    d1 = compile_fn(differentiate(f))
    hyp = True if differentiable_on_interior(f, iv, cfg) else None
    return solve_residual(lambda x: d1(x) - slope, iv, cfg, TheoremId.LAGRANGE,
                          terms=(d1, lambda x: slope), hypothesis=hyp)


def cauchy_points(f: Expr, g: Expr, iv: Interval,
                  cfg: SolverConfig | None = None) -> list[PointResult]:
    """Points where f'(x)(g(b)-g(a)) = g'(x)(f(b)-f(a)).

    With f = g (or g affine in f) the residual vanishes identically and the
    result is a single degenerate representative.
    """
    cfg = cfg or DEFAULT_CONFIG
    fc, gc = compile_fn(f), compile_fn(g)
    fa, fb = fc(iv.a), fc(iv.b)
    ga, gb = gc(iv.a), gc(iv.b)
    if not all(math.isfinite(v) for v in (fa, fb, ga, gb)):
        raise DomainError("f and g must evaluate finite at the interval endpoints")
    df = compile_fn(differentiate(f))
    dg = compile_fn(differentiate(g))
    dfv, dgv = fb - fa, gb - ga
    hyp = True if (differentiable_on_interior(f, iv, cfg)
                   and differentiable_on_interior(g, iv, cfg)) else None
    t1 = lambda x: df(x) * dgv
    t2 = lambda x: dg(x) * dfv
    return solve_residual(lambda x: t1(x) - t2(x), iv, cfg, TheoremId.CAUCHY,
                          terms=(t1, t2), hypothesis=hyp)


def integral_mvt_points(f: Expr, iv: Interval,
                        cfg: SolverConfig | None = None) -> list[PointResult]:
    """Points where f equals its average value over [a, b].

    The guaranteed point may sit on the boundary, so the scan runs with the
    endpoints included; f must be finite on the whole closed grid.
    """
    cfg = cfg or DEFAULT_CONFIG
    fc = compile_fn(f)
    for x in grid_points(iv, cfg, margin=0.0):
        if not math.isfinite(fc(x)):
            raise DomainError(f"f is not finite at x={x!r}; the mean value "
                              "identity needs a continuous integrand")
    mean = integrate(fc, iv.a, iv.b, cfg) / iv.width
    return solve_residual(lambda x: fc(x) - mean, iv, cfg, TheoremId.INTEGRAL_MVT,
                          terms=(fc, lambda x: mean), closed=True)
