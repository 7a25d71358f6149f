"""Poisson degree weights, truncation mass and the degree large-deviation rate."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .errors import ParameterError
from .types import ModelParams, PoissonProfile


def poisson_log_pmf(x: np.ndarray | int, lam: float) -> np.ndarray | float:
    """log(e^-lam lam^x / x!) via log-gamma, safe far beyond x = 170."""
    if not lam > 0:
        raise ParameterError(f"Poisson mean must be positive, got {lam!r}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ParameterError("Poisson support is the non-negative integers")
    out = -lam + x * math.log(lam) - gammaln(x + 1.0)
    return float(out) if out.ndim == 0 else out


def poisson_pmf(x: int, lam: float) -> float:
    """Return e^-lam lam^x / x!, computed in log space.

    Args:
        x: Non-negative integer degree.
        lam: Poisson mean, must be positive.

    Raises:
        ParameterError: lam <= 0 or x < 0.
    """
    return math.exp(poisson_log_pmf(x, lam))


def build_profile(params: ModelParams) -> PoissonProfile:
    """Tabulate p_0..p_{x_max} and U(x_max) = lam^-1 sum x p_x."""
    lam = params.lam
    degrees = np.arange(params.x_max + 1, dtype=float)
    weights = np.exp(poisson_log_pmf(degrees, lam))
    u_trunc = float(np.dot(degrees, weights) / lam)
    return PoissonProfile(
        lam=lam,
        weights=weights,
        u_trunc=u_trunc,
        phi_total=1.0 if params.unit_mass else u_trunc,
    )


def log_truncation_factor(profile: PoissonProfile) -> float:
    """log of (lam/e)^lam / prod_{x<=x_max} (x! p_x)^{p_x}.

    Zero in the x_max -> infinity limit; what is left at finite x_max is
    the slack the truncated degree profile leaves in the basic estimate.
    """
    lam = profile.lam
    degrees = profile.degrees
    log_p = poisson_log_pmf(degrees, lam)
    terms = profile.weights * (gammaln(degrees + 1.0) + log_p)
    return lam * (math.log(lam) - 1.0) - math.fsum(terms.tolist())


def large_deviation_rate(xi: float, eta: float) -> float:
    """Rate c(xi, eta) = min[(xi+eta) log(1+xi/eta) - xi, xi^2/(2 eta)].

    Governs how fast the fraction of degree-x vertices leaves an
    xi-window around its Poisson value eta.
    """
    if not eta > 0:
        raise ParameterError(f"eta must be positive, got {eta!r}")
    if xi < 0:
        raise ParameterError(f"xi must be non-negative, got {xi!r}")
    if xi == 0:
        return 0.0
    entropic = (xi + eta) * math.log1p(xi / eta) - xi
    return min(entropic, xi * xi / (2.0 * eta))
