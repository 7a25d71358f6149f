"""Type definitions for rigidcol."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError

VERSION = "0.4.1"

# Densities the analytic bound is stated for, and the wider band the
# command line accepts for exploration.
WORKING_RANGE = (2.40, 2.50)
EXPLORATION_RANGE = (2.30, 2.60)

BLUE, RED, GREEN = 0, 1, 2
COLOURS = (BLUE, RED, GREEN)

SOLVER_METHODS = ("bisection", "spiral")


def is_int(value: object) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


# ── Model ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ModelParams:
    """Global knobs of every computation.

    ``lam`` is the mean degree 2c. ``epsilon`` only matters for the
    degree-restricted subspace; the analytic bound is its limit.
    ``unit_mass`` replaces U(x_max) by 1 when tying phi2 to phi0, phi1.
    """

    c: float
    x_max: int = 60
    epsilon: float = 0.05
    unit_mass: bool = False

    def __post_init__(self) -> None:
        if not (isinstance(self.c, (int, float)) and math.isfinite(self.c) and self.c > 0):
            raise ParameterError(f"edge density c must be positive, got {self.c!r}")
        if not is_int(self.x_max) or self.x_max < 2:
            raise ParameterError(f"x_max must be an integer >= 2, got {self.x_max!r}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ParameterError(f"epsilon must be positive, got {self.epsilon!r}")

    @property
    def lam(self) -> float:
        return 2.0 * self.c


@dataclass(frozen=True, eq=False)
class PoissonProfile:
    """Truncated Poisson(lam) degree weights p_0..p_{x_max}.

    ``phi_total`` is the value phi0 + phi1 + phi2 is tied to: U(x_max),
    or exactly 1 when the model runs with ``unit_mass``.
    """

    lam: float
    weights: np.ndarray
    u_trunc: float
    phi_total: float

    @property
    def x_max(self) -> int:
        return len(self.weights) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.x_max + 1, dtype=float)


# ── Spreads ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SpreadBox:
    """The open region phi_min < phi_i < phi_max the optimum is sought in."""

    phi_min: float = 0.26
    phi_max: float = 0.4

    def __post_init__(self) -> None:
        if not (0.0 < self.phi_min < self.phi_max < 0.5):
            raise ParameterError(
                f"need 0 < phi_min < phi_max < 1/2, got ({self.phi_min}, {self.phi_max})"
            )

    def admits(self, *phis: float) -> bool:
        return all(self.phi_min < p < self.phi_max for p in phis)


@dataclass(frozen=True)
class SpreadVector:
    """Reduced blue, red and green spreads (phi0, phi1, phi2)."""

    phi0: float
    phi1: float
    phi2: float

    def __post_init__(self) -> None:
        for name, value in (("phi0", self.phi0), ("phi1", self.phi1), ("phi2", self.phi2)):
            if not (0.0 < value < 0.5):
                raise DomainError(f"{name} = {value!r} is outside (0, 1/2)")

    @classmethod
    def from_free(cls, phi0: float, phi1: float, total: float) -> "SpreadVector":
        """Build the vector from the two unknowns, phi2 = total - phi0 - phi1."""
        return cls(phi0, phi1, total - phi0 - phi1)

    def as_array(self) -> np.ndarray:
        return np.array([self.phi0, self.phi1, self.phi2], dtype=float)

    def max_abs_diff(self, other: "SpreadVector") -> float:
        return float(np.max(np.abs(self.as_array() - other.as_array())))


@dataclass(frozen=True)
class RotatedPoint:
    """Rotated coordinates: phi0 = y0 + y1, phi1 = y0 - y1."""

    y0: float
    y1: float

    def to_spreads(self) -> tuple[float, float]:
        return self.y0 + self.y1, self.y0 - self.y1


@dataclass(frozen=True, eq=False)
class MuProfile:
    """Occupation fractions mu[i, x, j] and their row sums alpha[i, x].

    Entries with j > x are unused and held at zero.
    """

    entries: np.ndarray
    alpha: np.ndarray

    @property
    def x_max(self) -> int:
        return self.entries.shape[1] - 1


# ── Solver ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class YBox:
    """Image of the admissible spread region in rotated coordinates.

    y0 ranges over (y0_lo, y0_hi); at a given y0, |y1| < halfwidth(y0).
    """

    y0_lo: float
    y0_hi: float
    box: SpreadBox

    def halfwidth(self, y0: float) -> float:
        return min(y0 - self.box.phi_min, self.box.phi_max - y0)

    @property
    def empty(self) -> bool:
        return not self.y0_lo < self.y0_hi


@dataclass(frozen=True)
class SolverConfig:
    """Configuration for the spread-system solver."""

    tol_residual: float = 1e-13
    max_outer_iters: int = 200
    method: str = "bisection"
    box: SpreadBox = field(default_factory=SpreadBox)
    verify_monotonicity: bool = True
    cross_check: bool = True
    fd_step: float = 1e-6
    grid_points: int = 5
    agreement_tol: float = 1e-9

    def __post_init__(self) -> None:
        if not self.tol_residual > 0:
            raise ParameterError(f"tol_residual must be positive, got {self.tol_residual!r}")
        if not is_int(self.max_outer_iters) or self.max_outer_iters < 1:
            raise ParameterError(f"max_outer_iters must be a positive integer, got {self.max_outer_iters!r}")
        if self.method not in SOLVER_METHODS:
            raise ParameterError(f"method must be one of {SOLVER_METHODS}, got {self.method!r}")
        if not self.fd_step > 0:
            raise ParameterError(f"fd_step must be positive, got {self.fd_step!r}")
        if not is_int(self.grid_points) or self.grid_points < 2:
            raise ParameterError(f"grid_points must be an integer >= 2, got {self.grid_points!r}")

    def bracket(self, total: float) -> YBox:
        """Intersect the four linear constraints on (y0, y1).

        phi_min < y0 +/- y1 < phi_max forces phi_min < y0 < phi_max, and
        phi_min < total - 2*y0 < phi_max bounds y0 from both sides.
        """
        lo = max(self.box.phi_min, 0.5 * (total - self.box.phi_max))
        hi = min(self.box.phi_max, 0.5 * (total - self.box.phi_min))
        ybox = YBox(lo, hi, self.box)
        if ybox.empty:
            raise ParameterError(
                f"admissible bracket is empty for phi total {total!r} and box {self.box}"
            )
        return ybox


@dataclass(frozen=True)
class PhiSolution:
    """The stationary spread vector for one density."""

    phi: SpreadVector
    residual_norm: float
    iterations: int
    c: float
    x_max: int
    unit_mass: bool = False
    method: str = "bisection"

    def matches(self, params: ModelParams) -> bool:
        return (
            self.c == params.c
            and self.x_max == params.x_max
            and self.unit_mass == params.unit_mass
        )


# ── Bound ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class BoundReport:
    """Per-vertex first-moment bound at one density."""

    c: float
    phi: SpreadVector
    f_value: float
    log_f: float
    x_max: int
    log_f_alt: float = 0.0
    log_truncation_factor: float = 0.0
    residual_norm: float = 0.0


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of the bisection on c for F(c) = 1."""

    c_star: float
    c_lo: float
    c_hi: float
    f_lo: float
    f_hi: float
    iterations: int
    x_max: int
    tol_c: float


# ── Graphs ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class MultiGraph:
    """n vertices and an ordered list of directed edges.

    Loops and repeated pairs are allowed; a loop adds 2 to its vertex degree.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if not is_int(self.n) or self.n < 1:
            raise ParameterError(f"a graph needs n >= 1 vertices, got {self.n!r}")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n = {self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        if not self.edges:
            return np.zeros(self.n, dtype=np.int64)
        ends = np.asarray(self.edges, dtype=np.int64).ravel()
        return np.bincount(ends, minlength=self.n)

    def has_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def neighbours(self) -> list[set[int]]:
        """Undirected neighbourhoods, loops excluded."""
        adjacency: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                adjacency[u].add(v)
                adjacency[v].add(u)
        return adjacency


@dataclass(frozen=True)
class Colouring:
    """A vertex -> {0, 1, 2} assignment (0 blue, 1 red, 2 green)."""

    types: tuple[int, ...]

    def __post_init__(self) -> None:
        for t in self.types:
            if t not in COLOURS:
                raise ParameterError(f"colour types must be 0, 1 or 2, got {t!r}")

    @property
    def n(self) -> int:
        return len(self.types)


@dataclass(frozen=True, eq=False)
class DegreeProfileEmpirical:
    """Degree fractions theta_0..theta_{x_max} and the share above x_max."""

    fractions: np.ndarray
    tail_fraction: float


@dataclass(frozen=True, eq=False)
class EmpiricalTemplate:
    """mu[i, x, j] and edge-type fractions beta of one coloured graph."""

    mu: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean of R(G) restricted to the subspace."""

    estimate: float
    stderr: float
    in_subspace_fraction: float
    samples: int
    seed: int
    n: int
    m: int
