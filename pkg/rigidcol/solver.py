"""Solve the spread system (K0, K1) = (0, 0) inside the admissible box.

The default scheme is a nested bisection in rotated coordinates: an inner
bisection follows the K1 = 0 curve (K1 decreases in y1) and an outer one
walks y0 until K0 vanishes on that curve (K0 increases along it). The
"spiral" scheme alternates one-dimensional solves of E0 in phi0 and E1
in phi1 from a corner of the box; it doubles as the uniqueness check.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, NamedTuple, Optional

from .errors import BracketError, ConvergenceError, DomainError, MonotonicityError, ParameterError
from .model import build_profile
from .spread import interior_grid, residual, rotated_partials, rotated_residual
from .types import (
    EXPLORATION_RANGE,
    WORKING_RANGE,
    ModelParams,
    PhiSolution,
    PoissonProfile,
    RotatedPoint,
    SolverConfig,
    SpreadBox,
    SpreadVector,
)

logger = logging.getLogger("rigidcol")

# Distance kept between bisection endpoints and the open edges of the box.
EDGE_GAP = 1e-12
# A finite-difference partial only counts as signed above this magnitude.
MIN_PARTIAL = 1e-8
# Signs of dK0/dy0, dK0/dy1, dK1/dy0, dK1/dy1.
SIGN_PATTERN = (1, 1, 1, -1)

_MAX_BISECTIONS = 200


class _OuterPoint(NamedTuple):
    g: float
    k1: float
    y1: float
    exact: bool


def _bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    f_lo: float,
    f_hi: float,
    tol: float,
) -> tuple[float, float, int]:
    """Bisect ``func`` on [lo, hi] given end values of opposite sign.

    Stops once |f| <= tol or the midpoint collapses onto an endpoint;
    returns (x, f(x), steps) for the best point evaluated.
    """
    best_x, best_f = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    if best_f == 0.0:
        return best_x, best_f, 0
    lo_positive = f_lo > 0.0
    for step in range(1, _MAX_BISECTIONS + 1):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return best_x, best_f, step - 1
        f_mid = func(mid)
        if abs(f_mid) < abs(best_f):
            best_x, best_f = mid, f_mid
        if abs(f_mid) <= tol:
            return mid, f_mid, step
        if (f_mid > 0.0) == lo_positive:
            lo = mid
        else:
            hi = mid
    return best_x, best_f, _MAX_BISECTIONS


def _check_density(c: float) -> None:
    lo, hi = EXPLORATION_RANGE
    if not lo <= c <= hi:
        raise ParameterError(f"c = {c!r} is outside the solver range [{lo}, {hi}]")
    if not WORKING_RANGE[0] <= c <= WORKING_RANGE[1]:
        logger.warning(
            "[solver] c = %s lies outside the working range [%s, %s]",
            c, WORKING_RANGE[0], WORKING_RANGE[1],
        )


def _solution(
    phi0: float,
    phi1: float,
    params: ModelParams,
    profile: PoissonProfile,
    box: SpreadBox,
    iterations: int,
    method: str,
) -> PhiSolution:
    e0, e1 = residual(phi0, phi1, params, profile, box)
    return PhiSolution(
        phi=SpreadVector.from_free(phi0, phi1, profile.phi_total),
        residual_norm=max(abs(e0), abs(e1)),
        iterations=iterations,
        c=params.c,
        x_max=params.x_max,
        unit_mass=params.unit_mass,
        method=method,
    )


# ── Runtime structure checks ─────────────────────────────────────────────────

def verify_sign_pattern(
    params: ModelParams,
    profile: PoissonProfile,
    config: Optional[SolverConfig] = None,
) -> list[tuple[RotatedPoint, tuple[float, float, float, float]]]:
    """Check (+, +, +, -) for the partials of (K0, K1) on an interior grid.

    Raises:
        MonotonicityError: a partial has the wrong sign or is too small
            to carry one; the offending point and partials are attached.
    """
    config = config or SolverConfig()
    checked = []
    for point in interior_grid(profile, config, config.grid_points):
        partials = rotated_partials(point, params, profile, config.fd_step, config.box)
        for value, sign in zip(partials, SIGN_PATTERN):
            if not (abs(value) > MIN_PARTIAL and math.copysign(1.0, value) == sign):
                raise MonotonicityError(
                    f"sign pattern (+,+,+,-) fails at (y0, y1) = ({point.y0:.9f}, {point.y1:.9f}) "
                    f"with partials ({', '.join(f'{p:.3e}' for p in partials)})",
                    point=(point.y0, point.y1),
                    partials=partials,
                )
        checked.append((point, partials))
    logger.debug("[solver] sign pattern holds at %d grid points", len(checked))
    return checked


def check_outer_monotone(
    params: ModelParams,
    profile: PoissonProfile,
    config: Optional[SolverConfig] = None,
    points: int = 9,
) -> list[tuple[float, float]]:
    """Assert g(y0) = K0(y0, y1*(y0)) strictly increases on a coarse y0 grid.

    Grid points where the K1 = 0 curve has left the box carry no value of
    g and are skipped.
    """
    config = config or SolverConfig()
    ybox = config.bracket(profile.phi_total)
    samples = []
    for k in range(points):
        y0 = ybox.y0_lo + (ybox.y0_hi - ybox.y0_lo) * (k + 0.5) / points
        outer = _outer_point(y0, params, profile, config)
        if outer.exact:
            samples.append((y0, outer.g))
    for (y_a, g_a), (y_b, g_b) in zip(samples, samples[1:]):
        if not g_b > g_a:
            raise MonotonicityError(
                f"K0 along K1 = 0 is not increasing between y0 = {y_a:.9f} and {y_b:.9f} "
                f"({g_a:.3e} -> {g_b:.3e})",
                point=(y_b, 0.0),
            )
    return samples


# ── Nested bisection ─────────────────────────────────────────────────────────

def _inner_ends(
    y0: float, params: ModelParams, profile: PoissonProfile, box: SpreadBox
) -> tuple[float, float, float, float]:
    w = min(y0 - box.phi_min, box.phi_max - y0) - EDGE_GAP
    if not w > 0.0:
        raise DomainError(f"y0 = {y0!r} leaves no admissible y1 interval")
    _, k_lo = rotated_residual(RotatedPoint(y0, -w), params, profile, box)
    _, k_hi = rotated_residual(RotatedPoint(y0, w), params, profile, box)
    return -w, w, k_lo, k_hi


def _k1_along(
    y0: float, params: ModelParams, profile: PoissonProfile, box: SpreadBox
) -> Callable[[float], float]:
    def k1(y1: float) -> float:
        return rotated_residual(RotatedPoint(y0, y1), params, profile, box)[1]
    return k1


def inner_root_y1(
    y0: float,
    params: ModelParams,
    profile: PoissonProfile,
    tol: float = 1e-13,
    box: Optional[SpreadBox] = None,
) -> float:
    """The y1 with K1(y0, y1) = 0, by bisection on the decreasing map y1 -> K1.

    Raises:
        BracketError: K1(y0, .) keeps one sign across the admissible y1 interval.
    """
    box = box or SpreadBox()
    lo, hi, k_lo, k_hi = _inner_ends(y0, params, profile, box)
    if not k_lo >= 0.0 >= k_hi:
        raise BracketError(
            f"K1 does not change sign across y1 in ({lo:.9f}, {hi:.9f}) at y0 = {y0!r}: "
            f"K1 = {k_lo:.3e}, {k_hi:.3e}"
        )
    y1, _, _ = _bisect(_k1_along(y0, params, profile, box), lo, hi, k_lo, k_hi, tol)
    return y1


def _outer_point(
    y0: float, params: ModelParams, profile: PoissonProfile, config: SolverConfig
) -> _OuterPoint:
    """g(y0) = K0(y0, y1*(y0)) on the K1 = 0 curve.

    Where that curve has left the box, K0 on the edge it left through
    still fixes the sign of g; such points come back with exact=False.
    """
    box = config.box
    lo, hi, k_lo, k_hi = _inner_ends(y0, params, profile, box)
    if k_lo >= 0.0 >= k_hi:
        y1, k1, _ = _bisect(
            _k1_along(y0, params, profile, box), lo, hi, k_lo, k_hi, config.tol_residual
        )
        k0, _ = rotated_residual(RotatedPoint(y0, y1), params, profile, box)
        return _OuterPoint(k0, k1, y1, True)

    if k_lo > 0.0 and k_hi > 0.0:
        edge, k1 = hi, k_hi
    elif k_lo < 0.0 and k_hi < 0.0:
        edge, k1 = lo, k_lo
    else:
        raise MonotonicityError(
            f"K1 increases across y1 at y0 = {y0!r} ({k_lo:.3e} -> {k_hi:.3e})",
            point=(y0, 0.0),
        )
    k0, _ = rotated_residual(RotatedPoint(y0, edge), params, profile, box)
    if (edge > 0.0 and k0 > 0.0) or (edge < 0.0 and k0 < 0.0):
        return _OuterPoint(k0, k1, edge, False)
    raise BracketError(
        f"K1 = 0 leaves the box at y0 = {y0!r} and K0 = {k0:.3e} on that edge "
        "does not decide the sign of the outer function"
    )


def _nested_bisection(
    params: ModelParams, profile: PoissonProfile, config: SolverConfig
) -> PhiSolution:
    ybox = config.bracket(profile.phi_total)
    lo, hi = ybox.y0_lo + EDGE_GAP, ybox.y0_hi - EDGE_GAP
    g_lo = _outer_point(lo, params, profile, config).g
    g_hi = _outer_point(hi, params, profile, config).g
    if not g_lo < 0.0 < g_hi:
        raise BracketError(
            f"K0 along K1 = 0 does not change sign over y0 in ({lo:.9f}, {hi:.9f}): "
            f"{g_lo:.3e}, {g_hi:.3e}"
        )
    if config.verify_monotonicity:
        check_outer_monotone(params, profile, config)

    best: Optional[RotatedPoint] = None
    best_norm = math.inf
    iteration = 0
    for iteration in range(1, config.max_outer_iters + 1):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        outer = _outer_point(mid, params, profile, config)
        if outer.exact:
            norm = max(abs(outer.g), abs(outer.k1))
            if norm < best_norm:
                best, best_norm = RotatedPoint(mid, outer.y1), norm
            if norm <= config.tol_residual:
                logger.debug("[solver] nested bisection converged after %d steps", iteration)
                phi0, phi1 = best.to_spreads()
                return _solution(phi0, phi1, params, profile, config.box, iteration, "bisection")
        if outer.g > 0.0:
            hi = mid
        else:
            lo = mid

    raise ConvergenceError(
        f"nested bisection stopped after {iteration} steps with residual {best_norm:.3e} "
        f"above {config.tol_residual:.1e}",
        best=SpreadVector.from_free(*best.to_spreads(), profile.phi_total) if best else None,
        residual_norm=best_norm,
    )


# ── Spiral (alternating one-dimensional solves) ──────────────────────────────

def opposite_corners(box: SpreadBox) -> tuple[tuple[float, float], tuple[float, float]]:
    """(phi0, phi1) starting corners (min, max) and (max, min), pulled inside."""
    low, high = box.phi_min + EDGE_GAP, box.phi_max - EDGE_GAP
    return (low, high), (high, low)


def _free_range(fixed: float, total: float, box: SpreadBox) -> tuple[float, float]:
    lo = max(box.phi_min, total - fixed - box.phi_max) + EDGE_GAP
    hi = min(box.phi_max, total - fixed - box.phi_min) - EDGE_GAP
    if not lo < hi:
        raise BracketError(f"no admissible partner spread when the other one is {fixed!r}")
    return lo, hi


def _coordinate_update(
    index: int,
    fixed: float,
    params: ModelParams,
    profile: PoissonProfile,
    config: SolverConfig,
) -> float:
    """Root in phi_index of E_index (increasing) with the other spread fixed.

    Without a sign change the update stops at the nearer edge.
    """
    lo, hi = _free_range(fixed, profile.phi_total, config.box)

    def e(value: float) -> float:
        pair = (value, fixed) if index == 0 else (fixed, value)
        return residual(*pair, params, profile, config.box)[index]

    e_lo, e_hi = e(lo), e(hi)
    if e_lo >= 0.0:
        return lo
    if e_hi <= 0.0:
        return hi
    value, _, _ = _bisect(e, lo, hi, e_lo, e_hi, config.tol_residual)
    return value


def spiral_solve(
    params: ModelParams,
    profile: PoissonProfile,
    config: Optional[SolverConfig] = None,
    start: Optional[tuple[float, float]] = None,
) -> PhiSolution:
    """Alternate phi0 <- root of E0, phi1 <- root of E1 from a box corner."""
    config = config or SolverConfig()
    start = start or opposite_corners(config.box)[0]
    phi0, phi1 = start
    norm = math.inf
    sweep = 0
    for sweep in range(1, config.max_outer_iters + 1):
        previous = (phi0, phi1)
        phi0 = _coordinate_update(0, phi1, params, profile, config)
        phi1 = _coordinate_update(1, phi0, params, profile, config)
        e0, e1 = residual(phi0, phi1, params, profile, config.box)
        norm = max(abs(e0), abs(e1))
        if norm <= config.tol_residual:
            logger.debug("[solver] spiral from %s converged after %d sweeps", start, sweep)
            return _solution(phi0, phi1, params, profile, config.box, sweep, "spiral")
        if (phi0, phi1) == previous:
            break

    raise ConvergenceError(
        f"spiral from {start} stalled after {sweep} sweeps with residual {norm:.3e}",
        best=SpreadVector.from_free(phi0, phi1, profile.phi_total),
        residual_norm=norm,
    )


def cross_check(
    solution: PhiSolution,
    params: ModelParams,
    profile: PoissonProfile,
    config: Optional[SolverConfig] = None,
) -> list[PhiSolution]:
    """Re-solve from both opposite corners and require agreement with ``solution``.

    Raises:
        ConvergenceError: some coordinate differs by more than agreement_tol.
    """
    config = config or SolverConfig()
    runs = []
    for start in opposite_corners(config.box):
        other = spiral_solve(params, profile, config, start)
        gap = solution.phi.max_abs_diff(other.phi)
        if gap > config.agreement_tol:
            raise ConvergenceError(
                f"solve from corner {start} disagrees with the primary solution by {gap:.3e}",
                best=other.phi,
                residual_norm=other.residual_norm,
            )
        runs.append(other)
    return runs


# ── Entry point ──────────────────────────────────────────────────────────────

def solve_system(
    params: ModelParams,
    config: Optional[SolverConfig] = None,
    profile: Optional[PoissonProfile] = None,
) -> PhiSolution:
    """Return the unique stationary spread vector at density params.c.

    Args:
        params: Model parameters; c must lie in [2.30, 2.60].
        config: Solver settings, defaults to SolverConfig().
        profile: Precomputed Poisson profile for params, built if omitted.

    Raises:
        ParameterError: c outside the solver range or empty bracket.
        MonotonicityError: the derivative sign pattern fails.
        BracketError: no sign change where one is required.
        ConvergenceError: iteration cap hit or the corner runs disagree.
    """
    config = config or SolverConfig()
    _check_density(params.c)
    profile = profile or build_profile(params)

    if config.verify_monotonicity:
        verify_sign_pattern(params, profile, config)

    if config.method == "spiral":
        solution = spiral_solve(params, profile, config)
    else:
        solution = _nested_bisection(params, profile, config)

    if config.cross_check:
        cross_check(solution, params, profile, config)

    phi = solution.phi
    logger.debug(
        "[solver] c=%s phi=(%.15g, %.15g, %.15g) residual=%.3e iterations=%d",
        params.c, phi.phi0, phi.phi1, phi.phi2, solution.residual_norm, solution.iterations,
    )
    return solution
