"""Per-vertex first-moment bound F(c) and the threshold it implies.

F(c) is the n-th root limit of the expected number of rigid colourings
on degree-regular graphs, evaluated at the solved spreads:

    log F = sum_x p_x log B(x, phi) - c log 2 + c sum_i (1 - 4 phi_i) log(1 - 2 phi_i)

The bound is read off where F crosses 1.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
import pandas as pd

from .errors import BracketError, ParameterError, RigidColError
from .model import build_profile, log_truncation_factor
from .solver import solve_system
from .spread import log_script_b
from .types import (
    EXPLORATION_RANGE,
    WORKING_RANGE,
    BoundReport,
    ModelParams,
    PhiSolution,
    PoissonProfile,
    SolverConfig,
    SpreadVector,
    ThresholdResult,
)
from .workers import map_ordered

logger = logging.getLogger("rigidcol")

SCAN_COLUMNS = ["c", "phi0", "phi1", "phi2", "f_value", "log_f"]

# Largest gap tolerated between the two exponent forms of log F.
_FORM_AGREEMENT = 1e-12


def log_bound(
    params: ModelParams, profile: PoissonProfile, phi: SpreadVector
) -> tuple[float, float]:
    """log F at phi, once with exponent (1 - 4 phi_i) c and once with (1 - 2 phi_i) c - lam phi_i."""
    log_b = log_script_b(params.x_max, phi)
    head = float(np.dot(profile.weights, log_b)) - params.c * math.log(2.0)
    spreads = phi.as_array()
    log_base = np.log1p(-2.0 * spreads)
    exponent = (1.0 - 4.0 * spreads) * params.c
    exponent_alt = (1.0 - 2.0 * spreads) * params.c - params.lam * spreads
    return (
        head + float(np.dot(exponent, log_base)),
        head + float(np.dot(exponent_alt, log_base)),
    )


def bound_per_vertex(
    params: ModelParams,
    sol: PhiSolution,
    profile: Optional[PoissonProfile] = None,
) -> BoundReport:
    """Evaluate F(c) at a solved spread vector.

    Raises:
        ParameterError: ``sol`` was solved for different parameters.
    """
    if not sol.matches(params):
        raise ParameterError(
            f"solution for (c={sol.c}, x_max={sol.x_max}, unit_mass={sol.unit_mass}) "
            f"does not match params (c={params.c}, x_max={params.x_max}, unit_mass={params.unit_mass})"
        )
    profile = profile or build_profile(params)
    log_f, log_f_alt = log_bound(params, profile, sol.phi)
    if abs(log_f - log_f_alt) > _FORM_AGREEMENT:
        logger.warning("[bound] exponent forms disagree at c = %s: %.3e", params.c, log_f - log_f_alt)

    report = BoundReport(
        c=params.c,
        phi=sol.phi,
        f_value=math.exp(log_f),
        log_f=log_f,
        x_max=params.x_max,
        log_f_alt=log_f_alt,
        log_truncation_factor=log_truncation_factor(profile),
        residual_norm=sol.residual_norm,
    )
    logger.debug("[bound] c=%s F=%.15g log F=%.6e", params.c, report.f_value, log_f)
    return report


def bound_at(
    c: float,
    x_max: int = 60,
    unit_mass: bool = False,
    config: Optional[SolverConfig] = None,
) -> BoundReport:
    """Solve the spread system at c and evaluate the bound there."""
    params = ModelParams(c=c, x_max=x_max, unit_mass=unit_mass)
    profile = build_profile(params)
    sol = solve_system(params, config, profile)
    return bound_per_vertex(params, sol, profile)


# ── Threshold ────────────────────────────────────────────────────────────────

def threshold_search(
    x_max: int = 60,
    tol_c: float = 1e-4,
    config: Optional[SolverConfig] = None,
    unit_mass: bool = False,
) -> ThresholdResult:
    """Bisect on c for F(c) = 1 inside the working range.

    F is decreasing in c, so the returned c_star = c_hi satisfies
    F(c_star) < 1 <= F(c_star - tol_c). When F(2.40) <= 1 the lower
    end is pushed down to 2.30 before giving up.

    Raises:
        BracketError: F does not cross 1 between the end points.
    """
    if not (math.isfinite(tol_c) and tol_c > 0):
        raise ParameterError(f"tol_c must be positive, got {tol_c!r}")

    def log_f(c: float) -> float:
        return bound_at(c, x_max, unit_mass, config).log_f

    c_lo, c_hi = WORKING_RANGE
    f_lo, f_hi = log_f(c_lo), log_f(c_hi)
    if not f_lo > 0.0:
        widened = EXPLORATION_RANGE[0]
        logger.warning("[bound] F(%s) <= 1, widening the bracket down to %s", c_lo, widened)
        widened_f = log_f(widened)
        if not widened_f > 0.0:
            raise BracketError(
                f"F does not exceed 1 at the lower end: F({c_lo}) = {math.exp(f_lo):.12g}, "
                f"F({widened}) = {math.exp(widened_f):.12g}, F({c_hi}) = {math.exp(f_hi):.12g}"
            )
        c_lo, f_lo = widened, widened_f
    if not f_hi < 0.0:
        raise BracketError(
            f"F does not drop below 1 at the upper end: F({c_lo}) = {math.exp(f_lo):.12g}, "
            f"F({c_hi}) = {math.exp(f_hi):.12g}"
        )

    iterations = 0
    while c_hi - c_lo > tol_c:
        c_mid = 0.5 * (c_lo + c_hi)
        f_mid = log_f(c_mid)
        iterations += 1
        if f_mid < 0.0:
            c_hi, f_hi = c_mid, f_mid
        else:
            c_lo, f_lo = c_mid, f_mid
        logger.debug("[bound] threshold bracket [%.9f, %.9f]", c_lo, c_hi)

    return ThresholdResult(
        c_star=c_hi,
        c_lo=c_lo,
        c_hi=c_hi,
        f_lo=math.exp(f_lo),
        f_hi=math.exp(f_hi),
        iterations=iterations,
        x_max=x_max,
        tol_c=tol_c,
    )


def naive_bound(c: float) -> float:
    """First-moment bound 3 (2/3)^c for unrestricted proper 3-colourings."""
    if not c > 0:
        raise ParameterError(f"edge density c must be positive, got {c!r}")
    return 3.0 * (2.0 / 3.0) ** c


def naive_threshold() -> float:
    """Density log 3 / log(3/2) where the unrestricted bound reaches 1."""
    return math.log(3.0) / math.log(1.5)


# ── Scans ────────────────────────────────────────────────────────────────────

def scan_grid(c_lo: float, c_hi: float, steps: int) -> list[float]:
    """Evenly spaced densities including both end points exactly."""
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise ParameterError(f"a scan needs at least 2 steps, got {steps!r}")
    lo, hi = EXPLORATION_RANGE
    if not lo <= c_lo < c_hi <= hi:
        raise ParameterError(f"need {lo} <= c_lo < c_hi <= {hi}, got ({c_lo!r}, {c_hi!r})")
    for end in (c_lo, c_hi):
        if not WORKING_RANGE[0] <= end <= WORKING_RANGE[1]:
            logger.warning(
                "[bound] scan end point c = %s lies outside the working range [%s, %s]",
                end, WORKING_RANGE[0], WORKING_RANGE[1],
            )
    return [float(c) for c in np.linspace(c_lo, c_hi, steps)]


def scan(
    c_lo: float,
    c_hi: float,
    steps: int,
    x_max: int = 60,
    jobs: int = 1,
    config: Optional[SolverConfig] = None,
    unit_mass: bool = False,
) -> list[BoundReport]:
    """One fresh solve and bound per grid density, ordered by c.

    A failing solve aborts the scan; its error message names the density.
    """
    def evaluate(c: float) -> BoundReport:
        try:
            return bound_at(c, x_max, unit_mass, config)
        except RigidColError as exc:
            exc.args = (f"c = {c!r}: {exc}",) + exc.args[1:]
            raise

    grid = scan_grid(c_lo, c_hi, steps)
    logger.debug("[bound] scanning %d densities on %d worker(s)", len(grid), jobs)
    return map_ordered(evaluate, grid, jobs)


def scan_frame(reports: list[BoundReport]) -> pd.DataFrame:
    """Tabulate scan rows under the c,phi0,phi1,phi2,f_value,log_f header."""
    rows = [
        {
            "c": r.c,
            "phi0": r.phi.phi0,
            "phi1": r.phi.phi1,
            "phi2": r.phi.phi2,
            "f_value": r.f_value,
            "log_f": r.log_f,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=SCAN_COLUMNS)
