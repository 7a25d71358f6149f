import logging

import numpy as np
import pytest

import rigidcol.solver as solver
from rigidcol.errors import BracketError, ConvergenceError, MonotonicityError, ParameterError
from rigidcol.model import build_profile
from rigidcol.solver import (
    check_outer_monotone,
    cross_check,
    inner_root_y1,
    solve_system,
    spiral_solve,
    verify_sign_pattern,
)
from rigidcol.spread import residual, rotated_residual
from rigidcol.types import ModelParams, RotatedPoint, SolverConfig, SpreadBox

HEADLINE_PHI = (0.331999249542, 0.333337236496, 0.334663513962)

FAST = SolverConfig(verify_monotonicity=False, cross_check=False)


class TestHeadlineSolution:
    def test_spreads(self, headline_solution):
        phi = headline_solution.phi
        assert phi.phi0 == pytest.approx(HEADLINE_PHI[0], abs=1e-9)
        assert phi.phi1 == pytest.approx(HEADLINE_PHI[1], abs=1e-9)
        assert phi.phi2 == pytest.approx(HEADLINE_PHI[2], abs=1e-9)
        assert phi.phi0 < phi.phi1 < phi.phi2

    def test_residual_is_tiny(self, headline_solution, headline_params, headline_profile):
        assert headline_solution.residual_norm <= 1e-12
        e0, e1 = residual(headline_solution.phi.phi0, headline_solution.phi.phi1,
                          headline_params, headline_profile)
        assert max(abs(e0), abs(e1)) <= 1e-12

    def test_inside_box_and_tied_total(self, headline_solution, headline_profile):
        phi = headline_solution.phi
        assert SpreadBox().admits(phi.phi0, phi.phi1, phi.phi2)
        assert phi.phi0 + phi.phi1 + phi.phi2 == pytest.approx(headline_profile.phi_total, abs=1e-15)

    def test_solution_metadata(self, headline_solution, headline_params):
        assert headline_solution.matches(headline_params)
        assert headline_solution.method == "bisection"
        assert headline_solution.iterations > 0

    def test_spiral_agrees(self, headline_solution, headline_params, headline_profile):
        other = spiral_solve(headline_params, headline_profile, FAST)
        assert other.method == "spiral"
        assert other.phi.max_abs_diff(headline_solution.phi) <= 1e-9

    def test_cross_check_returns_both_corners(self, headline_solution, headline_params, headline_profile):
        runs = cross_check(headline_solution, headline_params, headline_profile)
        assert len(runs) == 2
        for run in runs:
            assert run.phi.max_abs_diff(headline_solution.phi) <= 1e-9

    def test_deterministic(self, headline_solution, headline_params, headline_profile):
        again = solve_system(headline_params, FAST, headline_profile)
        assert again.phi == headline_solution.phi


class TestStructureChecks:
    @pytest.mark.parametrize("c", [2.42, 2.4682, 2.50])
    def test_sign_pattern(self, c):
        params = ModelParams(c=c)
        checked = verify_sign_pattern(params, build_profile(params), SolverConfig(grid_points=5))
        assert len(checked) == 25

    def test_outer_function_increases(self, headline_params, headline_profile):
        samples = check_outer_monotone(headline_params, headline_profile)
        assert len(samples) >= 5
        values = [g for _, g in samples]
        assert values[0] < 0 < values[-1]

    def test_broken_partials_are_reported(self, monkeypatch, headline_params):
        monkeypatch.setattr(solver, "rotated_partials", lambda *a, **k: (1.0, 1.0, 1.0, 1.0))
        with pytest.raises(MonotonicityError) as info:
            solve_system(headline_params)
        assert info.value.partials == (1.0, 1.0, 1.0, 1.0)
        assert info.value.point is not None
        assert info.value.exit_code == 4

    def test_tiny_partials_are_not_signed(self, monkeypatch, headline_params, headline_profile):
        monkeypatch.setattr(solver, "rotated_partials", lambda *a, **k: (1.0, 1e-12, 1.0, -1.0))
        with pytest.raises(MonotonicityError):
            verify_sign_pattern(headline_params, headline_profile)


class TestInnerRoot:
    def test_root_zeroes_k1(self, headline_params, headline_profile):
        y1 = inner_root_y1(0.33, headline_params, headline_profile)
        _, k1 = rotated_residual(RotatedPoint(0.33, y1), headline_params, headline_profile)
        assert abs(k1) <= 1e-12

    def test_root_increases_with_y0(self, headline_params, headline_profile):
        roots = [inner_root_y1(float(y0), headline_params, headline_profile)
                 for y0 in np.linspace(0.304, 0.350, 10)]
        assert all(b > a for a, b in zip(roots, roots[1:]))

    def test_curve_leaves_box(self, headline_params, headline_profile):
        with pytest.raises(BracketError):
            inner_root_y1(0.366, headline_params, headline_profile)


class TestFailures:
    @pytest.mark.parametrize("c", [2.2, 2.61, 3.0])
    def test_density_outside_range(self, c):
        with pytest.raises(ParameterError):
            solve_system(ModelParams(c=c))

    def test_warns_outside_working_range(self, caplog):
        with caplog.at_level(logging.WARNING, logger="rigidcol"):
            solver._check_density(2.35)
        assert "working range" in caplog.text

    def test_quiet_inside_working_range(self, caplog):
        with caplog.at_level(logging.WARNING, logger="rigidcol"):
            solver._check_density(2.45)
        assert caplog.text == ""

    def test_iteration_cap(self, headline_params, headline_profile):
        config = SolverConfig(max_outer_iters=1, verify_monotonicity=False, cross_check=False)
        with pytest.raises(ConvergenceError) as info:
            solve_system(headline_params, config, headline_profile)
        assert info.value.best is not None
        assert info.value.residual_norm > config.tol_residual

    def test_empty_bracket(self, headline_params, headline_profile):
        config = SolverConfig(box=SpreadBox(0.26, 0.27))
        with pytest.raises(ParameterError):
            solve_system(headline_params, config, headline_profile)

    @pytest.mark.parametrize("kwargs", [{"method": "newton"}, {"tol_residual": 0.0},
                                        {"max_outer_iters": 0}, {"grid_points": 1}])
    def test_invalid_config(self, kwargs):
        with pytest.raises(ParameterError):
            SolverConfig(**kwargs)


@pytest.mark.slow
def test_working_range_sweep():
    previous = None
    for c in np.linspace(2.40, 2.50, 21):
        params = ModelParams(c=float(c))
        sol = solve_system(params)
        assert sol.residual_norm <= 1e-12
        if previous is not None:
            assert sol.phi.max_abs_diff(previous) < 0.01
        previous = sol.phi
