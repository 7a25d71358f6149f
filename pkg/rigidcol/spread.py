"""The spread system: denominator B(x, phi), stationary occupation
fractions mu[i, x, j], type fractions alpha[i, x] and the two residuals
whose common zero is the optimal rigid-colouring profile.

Colour i's degree-x vertices come in N_i(x) admissible neighbourhood
patterns, weighted by (1 - 2 phi_i)^x:

    N_0(x) = max(0, 2^x - 2),  N_1(x) = 2^x - 1,  N_2(x) = 2^x.

Everything is evaluated in log space so any truncation x_max is safe.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional

import numpy as np
import pandas as pd
from scipy.special import gammaln, logsumexp

from .errors import DomainError, ParameterError
from .types import (
    COLOURS,
    ModelParams,
    MuProfile,
    PoissonProfile,
    RotatedPoint,
    SolverConfig,
    SpreadBox,
    SpreadVector,
)

_LOG2 = math.log(2.0)


@lru_cache(maxsize=32)
def _log_multiplicity(x_max: int) -> np.ndarray:
    """log N_i(x) for i = 0, 1, 2 and x = 0..x_max, -inf where N_i(x) = 0."""
    x = np.arange(x_max + 1, dtype=float)
    out = np.full((3, x_max + 1), -np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[0] = np.where(x >= 2, x * _LOG2 + np.log1p(-np.exp2(1.0 - x)), -np.inf)
        out[1] = np.where(x >= 1, x * _LOG2 + np.log1p(-np.exp2(-x)), -np.inf)
    out[2] = x * _LOG2
    out.setflags(write=False)
    return out


def _log_weights(x_max: int, phi: SpreadVector) -> np.ndarray:
    """log[N_i(x) (1 - 2 phi_i)^x]; x = 0 contributes the 0^0 = 1 factor."""
    x = np.arange(x_max + 1, dtype=float)
    log_base = np.log1p(-2.0 * phi.as_array())
    return _log_multiplicity(x_max) + np.outer(log_base, x)


def _log_b(log_weights: np.ndarray) -> np.ndarray:
    return logsumexp(log_weights, axis=0)


def _type_fractions(x_max: int, phi: SpreadVector) -> np.ndarray:
    log_w = _log_weights(x_max, phi)
    return np.exp(log_w - _log_b(log_w))


def _check_colour(i: int) -> None:
    if i not in COLOURS:
        raise ParameterError(f"colour index must be 0, 1 or 2, got {i!r}")


def _check_degree(x: int, x_max: Optional[int] = None) -> None:
    if x < 0 or (x_max is not None and x > x_max):
        raise ParameterError(f"degree {x!r} outside 0..{x_max if x_max is not None else 'inf'}")


def _check_profile(params: ModelParams, profile: PoissonProfile) -> None:
    if profile.lam != params.lam or profile.x_max != params.x_max:
        raise ParameterError(
            f"profile (lam={profile.lam}, x_max={profile.x_max}) was not built "
            f"from params (lam={params.lam}, x_max={params.x_max})"
        )


# ── Denominator and fractions ────────────────────────────────────────────────

def log_script_b(x_max: int, phi: SpreadVector) -> np.ndarray:
    """log B(x, phi) for x = 0..x_max."""
    return _log_b(_log_weights(x_max, phi))


def script_b(x: int, phi: SpreadVector) -> float:
    """B(x, phi) = sum_i N_i(x) (1 - 2 phi_i)^x, always positive."""
    _check_degree(x)
    return math.exp(float(log_script_b(x, phi)[x]))


def type_fraction(x: int, i: int, phi: SpreadVector) -> float:
    """alpha_x^i: share of degree-x vertices of colour i at the stationary point."""
    _check_degree(x)
    _check_colour(i)
    return float(_type_fractions(x, phi)[i, x])


def mu_entry(x: int, j: int, i: int, phi: SpreadVector) -> float:
    """mu^i_{x,j} = C(x, j) (1 - 2 phi_i)^x / B(x, phi) off the structural zeros.

    A colour-i vertex of degree x has j edges towards colour i+1 (mod 3).
    Rigidity forces mu^0_{x,0} = mu^0_{x,x} = mu^1_{x,0} = 0.
    """
    _check_degree(x)
    _check_colour(i)
    if not 0 <= j <= x:
        raise ParameterError(f"need 0 <= j <= x, got j={j!r}, x={x!r}")
    if (i == 0 and (j == 0 or j == x)) or (i == 1 and j == 0):
        return 0.0
    log_binom = gammaln(x + 1.0) - gammaln(j + 1.0) - gammaln(x - j + 1.0)
    log_w = x * math.log1p(-2.0 * phi.as_array()[i])
    return math.exp(log_binom + log_w - float(log_script_b(x, phi)[x]))


def build_mu_profile(phi: SpreadVector, params: ModelParams) -> MuProfile:
    """Assemble every mu^i_{x,j} for x <= x_max, with alpha as row sums."""
    size = params.x_max + 1
    x = np.arange(size, dtype=float)[:, None]
    j = np.arange(size, dtype=float)[None, :]
    inside = j <= x
    with np.errstate(invalid="ignore"):
        log_binom = np.where(
            inside,
            gammaln(x + 1.0) - gammaln(j + 1.0) - gammaln(np.maximum(x - j, 0.0) + 1.0),
            -np.inf,
        )
    log_base = np.log1p(-2.0 * phi.as_array())
    log_b = log_script_b(params.x_max, phi)

    entries = np.empty((3, size, size))
    for i in COLOURS:
        entries[i] = np.exp(log_binom + x * log_base[i] - log_b[:, None])
    entries[:, ~inside] = 0.0

    # structural zeros of rigid colourings
    diag = np.arange(size)
    entries[0, :, 0] = 0.0
    entries[0, diag, diag] = 0.0
    entries[1, :, 0] = 0.0

    return MuProfile(entries=entries, alpha=_type_fractions(params.x_max, phi))


# ── Residuals ────────────────────────────────────────────────────────────────

def residual(
    phi0: float,
    phi1: float,
    params: ModelParams,
    profile: PoissonProfile,
    box: Optional[SpreadBox] = None,
) -> tuple[float, float]:
    """(E0, E1) with E_i = lam phi_i - sum_x x p_x alpha_x^i.

    phi2 is tied to the free unknowns by phi2 = total - phi0 - phi1.

    Raises:
        DomainError: (phi0, phi1, phi2) leaves the admissible box.
    """
    box = box or SpreadBox()
    _check_profile(params, profile)
    phi2 = profile.phi_total - phi0 - phi1
    if not box.admits(phi0, phi1, phi2):
        raise DomainError(
            f"spreads ({phi0!r}, {phi1!r}, {phi2!r}) outside ({box.phi_min}, {box.phi_max})"
        )
    alpha = _type_fractions(params.x_max, SpreadVector(phi0, phi1, phi2))
    mass = profile.degrees * profile.weights
    e0 = params.lam * phi0 - float(np.dot(mass, alpha[0]))
    e1 = params.lam * phi1 - float(np.dot(mass, alpha[1]))
    return e0, e1


def rotated_residual(
    y: RotatedPoint,
    params: ModelParams,
    profile: PoissonProfile,
    box: Optional[SpreadBox] = None,
) -> tuple[float, float]:
    """(K0, K1)(y0, y1) = (E0, E1)(y0 + y1, y0 - y1).

    In the admissible box K0 increases in y0 and y1, K1 increases in y0
    and decreases in y1.
    """
    phi0, phi1 = y.to_spreads()
    return residual(phi0, phi1, params, profile, box)


def rotated_partials(
    y: RotatedPoint,
    params: ModelParams,
    profile: PoissonProfile,
    step: float = 1e-6,
    box: Optional[SpreadBox] = None,
) -> tuple[float, float, float, float]:
    """Central differences (dK0/dy0, dK0/dy1, dK1/dy0, dK1/dy1)."""
    k0_p, k1_p = rotated_residual(RotatedPoint(y.y0 + step, y.y1), params, profile, box)
    k0_m, k1_m = rotated_residual(RotatedPoint(y.y0 - step, y.y1), params, profile, box)
    k0_u, k1_u = rotated_residual(RotatedPoint(y.y0, y.y1 + step), params, profile, box)
    k0_d, k1_d = rotated_residual(RotatedPoint(y.y0, y.y1 - step), params, profile, box)
    h2 = 2.0 * step
    return (k0_p - k0_m) / h2, (k0_u - k0_d) / h2, (k1_p - k1_m) / h2, (k1_u - k1_d) / h2


def interior_grid(
    profile: PoissonProfile, config: SolverConfig, points: int
) -> list[RotatedPoint]:
    """points x points lattice at cell centres of the admissible y-box."""
    ybox = config.bracket(profile.phi_total)
    fractions = (np.arange(points) + 0.5) / points
    grid = []
    for f0 in fractions:
        y0 = float(ybox.y0_lo + (ybox.y0_hi - ybox.y0_lo) * f0)
        w = ybox.halfwidth(y0)
        for f1 in fractions:
            grid.append(RotatedPoint(y0, float(-w + 2.0 * w * f1)))
    return grid


def residual_grid(
    params: ModelParams,
    profile: PoissonProfile,
    config: Optional[SolverConfig] = None,
    points: int = 41,
) -> pd.DataFrame:
    """K0 and K1 sampled over the admissible box, for drawing both zero curves."""
    config = config or SolverConfig()
    if points < 2:
        raise ParameterError(f"grid needs at least 2 points per axis, got {points!r}")
    rows = []
    for y in interior_grid(profile, config, points):
        k0, k1 = rotated_residual(y, params, profile, config.box)
        rows.append({"y0": y.y0, "y1": y.y1, "K0": k0, "K1": k1})
    return pd.DataFrame(rows, columns=["y0", "y1", "K0", "K1"])
