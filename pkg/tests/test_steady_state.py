"""State equation, branches, turning points, mean-field flow."""

import math

import numpy as np
import pytest

from optbistab.steady_state import (
    evaluate_drive,
    integrate_maxwell_bloch,
    solve_state_equation,
    steady_mb_state,
    steady_moments,
    turning_points,
)


class TestEvaluateDrive:
    def test_direct_substitution(self):
        assert evaluate_drive(5.0, 1.0) == pytest.approx(6.0, abs=1e-15)
        assert evaluate_drive(5.0, 3.0) == pytest.approx(6.0, abs=1e-14)

    def test_zero(self):
        for C in (0.5, 4.0, 50.0):
            assert evaluate_drive(C, 0.0) == 0.0

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            evaluate_drive(5.0, -0.1)


class TestSolveStateEquation:
    def test_factorized_cubic(self):
        pts = solve_state_equation(5.0, 6.0)
        assert [p.branch for p in pts] == ["lower", "unstable-middle", "upper"]
        assert [p.X for p in pts] == pytest.approx([1.0, 2.0, 3.0], abs=1e-9)

    def test_monostable_below_threshold(self):
        pts = solve_state_equation(1.0, 3.0)
        assert len(pts) == 1 and pts[0].branch == "monostable"

    def test_zero_drive(self):
        pts = solve_state_equation(7.0, 0.0)
        assert len(pts) == 1 and pts[0].X == 0.0

    def test_turning_label_at_turning_drive(self):
        tp = turning_points(5.0)
        pts = solve_state_equation(5.0, tp.Y_minus)
        near = [p for p in pts if abs(p.X - tp.X_minus) < 1e-5]
        assert near and all(p.branch == "turning" for p in near)

    def test_root_consistency_sweep(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            C = float(rng.uniform(0.2, 20.0))
            Y = float(rng.uniform(0.0, 30.0))
            for p in solve_state_equation(C, Y):
                assert abs(evaluate_drive(C, p.X) - Y) <= 1e-9 * max(1.0, Y)

    def test_branch_ordering_interleaves_turning_points(self):
        tp = turning_points(5.0)
        pts = solve_state_equation(5.0, 6.0)
        x1, x2, x3 = (p.X for p in pts)
        assert x1 < tp.X_minus < x2 < tp.X_plus < x3

    def test_moments_attached(self):
        (pt,) = solve_state_equation(1.0, 2.0)
        a, jm, jp, jz = pt.moments
        assert a == pt.X
        assert jm == jp == pytest.approx(-pt.X / (1 + pt.X**2))


class TestTurningPoints:
    def test_threshold_case(self):
        tp = turning_points(4.0)
        assert tp.degenerate and not tp.exists
        assert tp.X_minus == pytest.approx(math.sqrt(3.0), abs=1e-12)
        assert tp.X_plus == pytest.approx(math.sqrt(3.0), abs=1e-12)
        assert tp.Y_minus == pytest.approx(3 * math.sqrt(3.0), abs=1e-12)

    def test_above_threshold(self):
        tp = turning_points(5.0)
        assert tp.exists
        assert tp.X_minus**2 == pytest.approx(4 - math.sqrt(5.0), abs=1e-12)
        assert tp.X_plus**2 == pytest.approx(4 + math.sqrt(5.0), abs=1e-12)

    def test_below_threshold(self):
        assert not turning_points(2.0).exists

    def test_slope_positive_outside_window(self):
        tp = turning_points(5.0)
        h = 1e-6
        for X in np.concatenate([
            np.linspace(0.01, tp.X_minus * 0.98, 25),
            np.linspace(tp.X_plus * 1.02, 10.0, 25),
        ]):
            slope = (evaluate_drive(5.0, X + h) - evaluate_drive(5.0, X - h)) / (2 * h)
            assert slope > 0


class TestSteadyMoments:
    def test_ground_state(self):
        assert steady_moments(0.0) == (0.0, 0.0, 0.0, -1.0)

    def test_half_saturation(self):
        a, jm, jp, jz = steady_moments(1.0)
        assert jm == pytest.approx(-0.5) and jz == pytest.approx(-0.5)

    def test_saturation_limit(self):
        a, jm, jp, jz = steady_moments(1e6)
        assert abs(jm) < 2e-6 and abs(jz) < 2e-12

    def test_inversion_range_sweep(self):
        for X in np.linspace(0.0, 50.0, 101):
            jz = steady_moments(X)[3]
            assert -1.0 <= jz < 0.0


class TestMaxwellBloch:
    def test_stable_fixed_point_is_stationary(self, weak_params):
        x0 = steady_mb_state(1.0)
        _, states = integrate_maxwell_bloch(weak_params, 6.0, x0, 50.0, dt=1e-3)
        assert np.max(np.abs(states - x0)) <= 1e-8

    def test_undriven_ground_state_stationary(self, weak_params):
        x0 = np.array([0.0, 0.0, 0.0, 0.0, -1.0])
        _, states = integrate_maxwell_bloch(weak_params, 0.0, x0, 10.0, dt=1e-3)
        assert np.max(np.abs(states - x0)) <= 1e-12

    def test_middle_root_unstable(self, weak_params):
        x0 = steady_mb_state(2.0)
        x0[0] += 1e-3
        _, states = integrate_maxwell_bloch(weak_params, 6.0, x0, 150.0, dt=1e-3)
        final = states[-1]
        d_lower = np.max(np.abs(final - steady_mb_state(1.0)))
        d_upper = np.max(np.abs(final - steady_mb_state(3.0)))
        assert min(d_lower, d_upper) < 1e-3
        assert abs(final[0] - 2.0) > 0.5

    def test_relaxation_onto_every_stable_root(self, weak_params):
        for X in (1.0, 3.0):
            x0 = steady_mb_state(X) + 1e-2
            _, states = integrate_maxwell_bloch(weak_params, 6.0, x0, 130.0, dt=1e-3)
            assert np.max(np.abs(states[-1] - steady_mb_state(X))) <= 1e-8

    def test_bad_initial_shape_rejected(self, weak_params):
        with pytest.raises(ValueError):
            integrate_maxwell_bloch(weak_params, 6.0, np.zeros(4), 1.0)
