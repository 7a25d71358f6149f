import math

import mpmath
import numpy as np
import pytest

from rigidcol.errors import ParameterError
from rigidcol.model import (
    build_profile,
    large_deviation_rate,
    log_truncation_factor,
    poisson_log_pmf,
    poisson_pmf,
)
from rigidcol.types import ModelParams


class TestPoisson:
    def test_zero_degree_is_exp_minus_lambda(self):
        assert poisson_pmf(0, 4.93631) == pytest.approx(math.exp(-4.93631), rel=1e-15)

    @pytest.mark.parametrize("x", [0, 1, 5, 17, 60, 171, 400])
    def test_matches_high_precision(self, x):
        lam = mpmath.mpf("4.93631")
        exact = mpmath.exp(-lam) * lam**x / mpmath.factorial(x)
        assert poisson_pmf(x, 4.93631) == pytest.approx(float(exact), rel=1e-11)

    def test_vectorized_log_pmf(self):
        x = np.arange(10)
        out = poisson_log_pmf(x, 3.0)
        assert out.shape == (10,)
        assert np.exp(out).sum() == pytest.approx(0.9988975118698846, rel=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ParameterError):
            poisson_pmf(3, 0.0)
        with pytest.raises(ParameterError):
            poisson_pmf(-1, 2.0)


class TestProfile:
    def test_truncated_mass_is_one_at_sixty(self, headline_profile):
        assert headline_profile.weights.sum() == pytest.approx(1.0, abs=1e-13)
        assert headline_profile.u_trunc == pytest.approx(1.0, abs=1e-13)
        assert headline_profile.phi_total == headline_profile.u_trunc

    def test_unit_mass_fixes_total(self):
        profile = build_profile(ModelParams(c=2.45, x_max=8, unit_mass=True))
        assert profile.phi_total == 1.0
        assert profile.u_trunc < 0.99

    def test_lambda_is_twice_c(self, headline_params, headline_profile):
        assert headline_params.lam == 2 * headline_params.c
        assert headline_profile.lam == headline_params.lam
        assert headline_profile.x_max == 60

    @pytest.mark.parametrize("kwargs", [{"c": 0.0}, {"c": -1.0}, {"c": 2.4, "x_max": 1},
                                        {"c": 2.4, "epsilon": 0.0}])
    def test_invalid_params(self, kwargs):
        with pytest.raises(ParameterError):
            ModelParams(**kwargs)


class TestTruncationFactor:
    def test_vanishes_at_large_truncation(self, headline_profile):
        assert abs(log_truncation_factor(headline_profile)) < 1e-10

    def test_larger_at_small_truncation(self, headline_profile):
        coarse = build_profile(ModelParams(c=2.468155, x_max=8))
        assert abs(log_truncation_factor(coarse)) > abs(log_truncation_factor(headline_profile))
        assert abs(log_truncation_factor(coarse)) > 1e-4


class TestLargeDeviationRate:
    def test_zero_at_zero(self):
        assert large_deviation_rate(0.0, 0.3) == 0.0

    @pytest.mark.parametrize("xi,eta", [(0.01, 0.2), (0.1, 0.05), (0.5, 0.5), (2.0, 0.1)])
    def test_is_minimum_of_both_forms(self, xi, eta):
        x, e = mpmath.mpf(xi), mpmath.mpf(eta)
        entropic = (x + e) * mpmath.log(1 + x / e) - x
        quadratic = x**2 / (2 * e)
        assert large_deviation_rate(xi, eta) == pytest.approx(float(min(entropic, quadratic)), rel=1e-12)

    def test_increasing_in_xi(self):
        values = [large_deviation_rate(xi, 0.1) for xi in np.linspace(0.0, 1.0, 21)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ParameterError):
            large_deviation_rate(0.1, 0.0)
        with pytest.raises(ParameterError):
            large_deviation_rate(-0.1, 0.2)
