"""Kernel tests: intervals, quadrature, root refinement, residual search."""

import math

import hypothesis.strategies as st
import pytest
from hypothesis import given

from mvtlab.expr import parse
from mvtlab.numerics import (
    DEFAULT_CONFIG, DomainError, Interval, PointResult, QuadratureError,
    SolverConfig, TheoremId, bracket_scan, central_diff,
    differentiable_on_interior, grid_points, integrate, one_sided_derivative,
    refine_root, residual_scale, solve_residual,
)

CFG = DEFAULT_CONFIG


class TestInterval:
    def test_width_and_midpoint(self):
        iv = Interval(-1.0, 3.0)
        assert iv.width == 4.0
        assert iv.midpoint == 1.0

    def test_rejects_reversed(self):
        with pytest.raises(ValueError):
            Interval(1.0, 1.0)
        with pytest.raises(ValueError):
            Interval(2.0, -2.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Interval(0.0, math.inf)
        with pytest.raises(ValueError):
            Interval(math.nan, 1.0)


class TestSolverConfig:
    def test_defaults(self):
        assert CFG.scan_points == 4096
        assert CFG.root_tol == 1e-12
        assert CFG.residual_tol == 1e-9
        assert CFG.quad_tol == 1e-10
        assert CFG.endpoint_margin == 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(scan_points=4)
        with pytest.raises(ValueError):
            SolverConfig(root_tol=0.0)
        with pytest.raises(ValueError):
            SolverConfig(residual_tol=-1e-9)
        with pytest.raises(ValueError):
            SolverConfig(endpoint_margin=0.5)


class TestGrid:
    def test_count_and_margins(self):
        iv = Interval(0.0, 1.0)
        xs = grid_points(iv, CFG)
        assert len(xs) == CFG.scan_points
        assert xs[0] == pytest.approx(CFG.endpoint_margin, rel=1e-6)
        assert xs[-1] == pytest.approx(1.0 - CFG.endpoint_margin, rel=1e-6)
        assert all(a < b for a, b in zip(xs, xs[1:]))

    def test_closed_grid_hits_endpoints(self):
        xs = grid_points(Interval(-2.0, 3.0), CFG, margin=0.0)
        assert xs[0] == -2.0
        assert xs[-1] == pytest.approx(3.0)

    def test_residual_scale_floor_is_one(self):
        s = residual_scale([lambda x: 1e-3], Interval(0.0, 1.0), CFG)
        assert s == 1.0

    def test_residual_scale_tracks_largest_term(self):
        s = residual_scale([lambda x: 5.0 * x, lambda x: -2.0],
                           Interval(0.0, 2.0), CFG)
        assert s == pytest.approx(10.0, rel=1e-6)


class TestIntegrate:
    def test_polynomial(self):
        v = integrate(lambda x: x * x, 0.0, 1.0, CFG)
        assert v == pytest.approx(1 / 3, abs=1e-12)

    def test_sine(self):
        v = integrate(math.sin, 0.0, math.pi, CFG)
        assert v == pytest.approx(2.0, abs=1e-10)

    def test_empty_range(self):
        assert integrate(math.sin, 1.0, 1.0, CFG) == 0.0

    def test_reversed_range_rejected(self):
        with pytest.raises(ValueError):
            integrate(math.sin, 1.0, 0.0, CFG)

    def test_bounded_with_singular_derivative(self):
        v = integrate(lambda x: math.sqrt(x) if x >= 0 else math.nan,
                      0.0, 1.0, CFG)
        assert v == pytest.approx(2 / 3, abs=1e-10)

    def test_unbounded_integrand_raises(self):
        # integrable, but the spike outruns the per-level error budget
        with pytest.raises(QuadratureError):
            integrate(lambda x: 1.0 / math.sqrt(x) if x > 0 else math.inf,
                      0.0, 1.0, CFG)


class TestRefineRoot:
    def test_converges(self):
        r = refine_root(math.cos, 1.0, 2.0, CFG)
        assert r == pytest.approx(math.pi / 2, abs=1e-11)

    def test_endpoint_exact_zero(self):
        assert refine_root(lambda x: x, 0.0, 1.0, CFG) == 0.0

    def test_requires_sign_change(self):
        with pytest.raises(ValueError):
            refine_root(lambda x: x * x + 1, 0.0, 1.0, CFG)

    def test_steep_function(self):
        r = refine_root(lambda x: math.tan(x) - 1e6, 1.5, 1.5707962, CFG)
        assert math.tan(r) == pytest.approx(1e6, rel=1e-5)


class TestCentralDiff:
    def test_first_order(self):
        d = central_diff(math.sin, 0.7)
        assert d == pytest.approx(math.cos(0.7), abs=1e-10)

    def test_second_order(self):
        d = central_diff(math.exp, 0.3, order=2)
        assert d == pytest.approx(math.exp(0.3), abs=1e-6)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            central_diff(math.sin, 0.0, order=3)

    def test_nonfinite_stencil(self):
        from mvtlab.expr import compile_fn
        with pytest.raises(DomainError):
            central_diff(compile_fn(parse("sqrt(x)")), 0.0)


@given(st.floats(-2.0, 2.0), st.floats(0.1, 3.0))
def test_central_diff_tracks_symbolic(c, h):
    # polynomial with a known derivative, sampled away from the scale floor
    f = lambda x: (x - c) ** 3 + 2 * (x - c)
    d = central_diff(f, c + h)
    assert d == pytest.approx(3 * h * h + 2, rel=1e-7)


class TestSolveResidual:
    def test_single_crossing(self):
        pts = solve_residual(lambda x: x - 0.3, Interval(0.0, 1.0), CFG,
                             TheoremId.FLETT)
        assert len(pts) == 1
        assert pts[0].xi == pytest.approx(0.3, abs=1e-10)
        assert not pts[0].degenerate

    def test_multiple_crossings_sorted(self):
        pts = solve_residual(math.sin, Interval(1.0, 10.0), CFG,
                             TheoremId.ROLLE)
        want = [math.pi, 2 * math.pi, 3 * math.pi]
        assert [p.xi for p in pts] == pytest.approx(want, abs=1e-9)

    def test_identically_zero_is_degenerate(self):
        pts = solve_residual(lambda x: 0.0, Interval(0.0, 1.0), CFG,
                             TheoremId.FLETT, hypothesis=True)
        assert len(pts) == 1
        assert pts[0].degenerate
        assert pts[0].xi == 0.5
        assert pts[0].hypothesis_satisfied is True

    def test_tiny_residual_counts_as_zero(self):
        # scale comes from the terms, so 1e-12 against unit terms is zero
        pts = solve_residual(lambda x: 1e-12, Interval(0.0, 1.0), CFG,
                             TheoremId.FLETT, terms=(lambda x: 1.0,))
        assert pts[0].degenerate

    def test_zero_run_reported_once(self):
        def plateau(x):
            if x < 0.3:
                return x - 0.3
            if x <= 0.6:
                return 0.0
            return x - 0.6

        pts = solve_residual(plateau, Interval(0.0, 1.0), CFG, TheoremId.FLETT)
        assert len(pts) == 1
        assert pts[0].degenerate
        assert 0.4 < pts[0].xi < 0.5

    def test_exact_grid_zero_is_reported(self):
        xs = grid_points(Interval(0.0, 1.0), CFG)
        target = xs[137]
        pts = solve_residual(lambda x: x - target, Interval(0.0, 1.0), CFG,
                             TheoremId.FLETT)
        assert [p.xi for p in pts] == [target]

    def test_exact_grid_touch_is_not_a_root(self):
        xs = grid_points(Interval(0.0, 1.0), CFG)
        target = xs[411]
        pts = solve_residual(lambda x: (x - target) ** 2, Interval(0.0, 1.0),
                             CFG, TheoremId.FLETT)
        assert pts == []

    def test_anchored_endpoint_noise_is_rejected(self):
        # the residual of x^3+2x-1 under the tangency identity factors as
        # 2(x-1)(x+2)^2: the double zero at the left endpoint wobbles inside
        # roundoff and must not surface as a second root
        f = parse("x^3+2*x-1")
        from mvtlab.flett import flett_residual
        F = flett_residual(f, -2.0)
        pts = solve_residual(F, Interval(-2.0, 2.0), CFG, TheoremId.FLETT)
        assert len(pts) == 1
        assert pts[0].xi == pytest.approx(1.0, abs=1e-8)

    def test_nonfinite_everywhere_raises(self):
        with pytest.raises(DomainError):
            solve_residual(lambda x: math.nan, Interval(0.0, 1.0), CFG,
                           TheoremId.FLETT)

    def test_theorem_id_attached(self):
        pts = solve_residual(lambda x: x - 0.5, Interval(0.0, 1.0), CFG,
                             TheoremId.MEYERS_2_4)
        assert pts[0].theorem_id is TheoremId.MEYERS_2_4


class TestBracketScan:
    def test_finds_brackets(self):
        scan = bracket_scan(math.sin, Interval(1.0, 7.0), CFG)
        assert len(scan.brackets) == 2
        lo, hi = scan.brackets[0]
        assert lo < math.pi < hi

    def test_identically_zero_flag(self):
        scan = bracket_scan(lambda x: 0.0, Interval(0.0, 1.0), CFG)
        assert scan.identically_zero
        assert scan.brackets == ()

    def test_min_tracking(self):
        scan = bracket_scan(lambda x: (x - 0.4) ** 2 + 1e-3,
                            Interval(0.0, 1.0), CFG)
        assert scan.min_abs_x == pytest.approx(0.4, abs=1e-3)
        assert scan.min_abs_value == pytest.approx(1e-3, rel=1e-3)


class TestSmoothnessChecks:
    def test_one_sided_derivative_finite(self):
        assert one_sided_derivative(parse("x^3"), 1.0, CFG) == pytest.approx(3.0)

    def test_one_sided_derivative_singular(self):
        assert one_sided_derivative(parse("asin(x)"), 1.0, CFG) is None
        assert one_sided_derivative(parse("sqrt(x)"), 0.0, CFG) is None

    def test_differentiable_polynomial(self):
        assert differentiable_on_interior(parse("x^3"), Interval(-1, 1), CFG)

    def test_kink_detected(self):
        assert not differentiable_on_interior(parse("abs(x)"),
                                              Interval(-1, 1), CFG)
        assert not differentiable_on_interior(parse("abs(x-0.3)"),
                                              Interval(0, 1), CFG)

    def test_jump_detected(self):
        assert not differentiable_on_interior(parse("sgn(x)"),
                                              Interval(-1, 1), CFG)

    def test_kink_outside_interval_is_fine(self):
        assert differentiable_on_interior(parse("abs(x)"),
                                          Interval(0.5, 1.0), CFG)

    def test_asin_smooth_inside(self):
        # the derivative blows up only at the closed endpoints
        assert differentiable_on_interior(parse("asin(x)"),
                                          Interval(-1, 1), CFG)


def test_point_result_defaults():
    p = PointResult(0.5, 1e-12, TheoremId.FLETT)
    assert p.degenerate is False
    assert p.hypothesis_satisfied is None
