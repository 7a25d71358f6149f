import logging
import math
from types import SimpleNamespace

import mpmath
import pandas as pd
import pytest

import rigidcol.bound as bound
from rigidcol.bound import (
    SCAN_COLUMNS,
    bound_at,
    bound_per_vertex,
    log_bound,
    naive_bound,
    naive_threshold,
    scan,
    scan_frame,
    scan_grid,
    threshold_search,
)
from rigidcol.errors import BracketError, ParameterError
from rigidcol.model import build_profile
from rigidcol.types import ModelParams, SolverConfig, SpreadVector


def high_precision_log_f(c, x_max, phi):
    mpmath.mp.dps = 40
    c = mpmath.mpf(c)
    lam = 2 * c
    total = -c * mpmath.log(2)
    for x in range(x_max + 1):
        p = mpmath.exp(-lam) * lam**x / mpmath.factorial(x)
        b = (max(0, 2**x - 2) * (1 - 2 * mpmath.mpf(phi[0])) ** x
             + (2**x - 1) * (1 - 2 * mpmath.mpf(phi[1])) ** x
             + 2**x * (1 - 2 * mpmath.mpf(phi[2])) ** x)
        total += p * mpmath.log(b)
    for f in phi:
        f = mpmath.mpf(f)
        total += c * (1 - 4 * f) * mpmath.log(1 - 2 * f)
    return float(total)


class TestHeadlineBound:
    def test_below_one(self, headline_report):
        assert headline_report.f_value < 0.99999995
        assert headline_report.f_value > 0.9999
        assert headline_report.log_f < 0

    def test_exponent_forms_agree(self, headline_report):
        assert headline_report.log_f == pytest.approx(headline_report.log_f_alt, abs=1e-14)

    def test_matches_high_precision(self, headline_report):
        phi = headline_report.phi
        exact = high_precision_log_f(headline_report.c, 60, (phi.phi0, phi.phi1, phi.phi2))
        assert headline_report.log_f == pytest.approx(exact, abs=1e-12)

    def test_carries_solution_data(self, headline_report, headline_solution):
        assert headline_report.phi == headline_solution.phi
        assert headline_report.residual_norm == headline_solution.residual_norm
        assert abs(headline_report.log_truncation_factor) < 1e-10

    def test_rejects_foreign_solution(self, headline_solution):
        with pytest.raises(ParameterError):
            bound_per_vertex(ModelParams(c=2.45), headline_solution)

    def test_recomputable_from_spreads(self, headline_params, headline_profile, headline_report):
        log_f, _ = log_bound(headline_params, headline_profile, headline_report.phi)
        assert math.exp(log_f) == headline_report.f_value


class TestSymmetricPoint:
    def test_oracle(self):
        params = ModelParams(c=2.468155, unit_mass=True)
        third = 1.0 / 3.0
        log_f, log_f_alt = log_bound(params, build_profile(params), SpreadVector(third, third, third))
        assert log_f == pytest.approx(high_precision_log_f(2.468155, 60, (third,) * 3), abs=1e-13)
        assert log_f == pytest.approx(0.0005695661, abs=1e-9)
        assert log_f_alt == pytest.approx(log_f, abs=1e-14)


class TestMonotonicity:
    def test_decreasing_in_c(self, headline_report):
        low = bound_at(2.44).f_value
        high = bound_at(2.50).f_value
        assert low > headline_report.f_value > high
        assert low > 1 > high

    def test_unit_mass_is_immaterial_at_sixty(self, headline_report):
        other = bound_at(2.468155, unit_mass=True)
        assert abs(other.f_value - headline_report.f_value) < 1e-13

    def test_tolerance_barely_moves_f(self, headline_report):
        loose = bound_at(2.468155, config=SolverConfig(tol_residual=1e-10))
        assert abs(loose.f_value - headline_report.f_value) < 1e-9

    def test_spiral_method_gives_same_bound(self, headline_report):
        other = bound_at(2.468155, config=SolverConfig(method="spiral"))
        assert abs(other.f_value - headline_report.f_value) < 1e-10


@pytest.fixture(scope="module")
def threshold_result():
    return threshold_search(tol_c=1e-4)


class TestThreshold:
    def test_bracket(self, threshold_result):
        assert threshold_result.c_star == threshold_result.c_hi
        assert 0 < threshold_result.c_hi - threshold_result.c_lo <= 1e-4
        assert threshold_result.c_star <= 2.4682
        assert threshold_result.f_hi < 1 <= threshold_result.f_lo
        assert threshold_result.iterations > 0

    def test_crossing(self, threshold_result):
        assert bound_at(threshold_result.c_star + 1e-3).f_value < 1
        assert bound_at(threshold_result.c_star - 1e-3).f_value > 1

    def test_improves_on_naive_threshold(self, threshold_result):
        assert threshold_result.c_star < naive_threshold()

    def test_upper_end_must_drop_below_one(self, monkeypatch):
        monkeypatch.setattr(bound, "bound_at", lambda c, *a, **k: SimpleNamespace(log_f=0.1))
        with pytest.raises(BracketError, match="upper end"):
            threshold_search()

    def test_lower_end_is_widened_before_failing(self, monkeypatch):
        seen = []

        def fake(c, *args, **kwargs):
            seen.append(c)
            return SimpleNamespace(log_f=-0.1)

        monkeypatch.setattr(bound, "bound_at", fake)
        with pytest.raises(BracketError, match="lower end"):
            threshold_search()
        assert 2.30 in seen

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ParameterError):
            threshold_search(tol_c=0.0)


class TestNaive:
    def test_bound(self):
        assert naive_bound(1.0) == pytest.approx(2.0)
        assert naive_bound(2.468155) > 1

    def test_threshold(self):
        assert naive_threshold() == pytest.approx(2.7095, abs=1e-4)
        assert naive_bound(naive_threshold()) == pytest.approx(1.0, abs=1e-14)


@pytest.fixture(scope="module")
def scan_reports():
    return scan(2.44, 2.50, 7)


class TestScan:
    def test_rows(self, scan_reports):
        frame = scan_frame(scan_reports)
        assert list(frame.columns) == SCAN_COLUMNS
        assert len(frame) == 7
        assert frame["c"].tolist()[0] == 2.44 and frame["c"].tolist()[-1] == 2.50
        assert frame["f_value"].is_monotonic_decreasing

    def test_endpoints_match_single_solves(self, scan_reports):
        assert scan_reports[0].f_value == bound_at(2.44).f_value
        assert scan_reports[-1].f_value == bound_at(2.50).f_value

    def test_worker_count_does_not_change_results(self, scan_reports):
        threaded = scan(2.44, 2.50, 7, jobs=3)
        pd.testing.assert_frame_equal(
            scan_frame(threaded), scan_frame(scan_reports), check_exact=True
        )

    def test_two_steps(self):
        assert [r.c for r in scan(2.45, 2.47, 2)] == [2.45, 2.47]

    @pytest.mark.parametrize("args", [(2.50, 2.44, 7), (2.44, 2.50, 1), (2.44, 2.70, 5),
                                      (2.20, 2.50, 5)])
    def test_bad_grid(self, args):
        with pytest.raises(ParameterError):
            scan(*args)

    def test_failure_names_density(self, monkeypatch):
        def broken(*args, **kwargs):
            raise BracketError("no sign change")

        monkeypatch.setattr(bound, "solve_system", broken)
        with pytest.raises(BracketError, match=r"c = 2\.44: no sign change"):
            scan(2.44, 2.50, 3)

    def test_warns_once_per_end_outside_working_range(self, caplog):
        with caplog.at_level(logging.WARNING, logger="rigidcol"):
            grid = scan_grid(2.35, 2.45, 3)
        assert len(grid) == 3 and grid[0] == 2.35 and grid[-1] == 2.45
        warnings = [r.getMessage() for r in caplog.records]
        assert len(warnings) == 1
        assert "c = 2.35" in warnings[0] and "working range" in warnings[0]

    def test_quiet_inside_working_range(self, caplog):
        with caplog.at_level(logging.WARNING, logger="rigidcol"):
            scan_grid(2.44, 2.50, 3)
        assert caplog.records == []


@pytest.mark.slow
def test_truncation_is_converged_at_sixty(headline_report):
    wide = bound_at(2.468155, x_max=120)
    assert abs(wide.f_value - headline_report.f_value) < 1e-12


@pytest.mark.slow
def test_fine_grid_crosses_once():
    frame = scan_frame(scan(2.40, 2.50, 21))
    signs = (frame["log_f"] < 0).tolist()
    assert signs[0] is False and signs[-1] is True
    assert sum(a != b for a, b in zip(signs, signs[1:])) == 1
    assert (frame["f_value"].diff().iloc[1:] < 0).all()


@pytest.mark.slow
def test_threshold_is_converged_in_truncation():
    narrow = threshold_search(x_max=60, tol_c=1e-6)
    wide = threshold_search(x_max=120, tol_c=1e-6)
    assert abs(narrow.c_star - wide.c_star) < 1e-5
