"""rigidcol: first-moment upper bound on the 3-colourability threshold of
random graphs, counted over rigid colourings.

Usage:
    import rigidcol

    report = rigidcol.bound_at(2.468155)
    report.f_value          # < 1: graphs with 2.468155 n edges are a.s. not 3-colourable

    result = rigidcol.threshold_search(tol_c=1e-4)
    result.c_star           # about 2.4682
"""

from __future__ import annotations

import logging
import sys

from .bound import (
    bound_at,
    bound_per_vertex,
    log_bound,
    naive_bound,
    naive_threshold,
    scan,
    scan_frame,
    threshold_search,
)
from .colouring import (
    colour_template,
    count_proper,
    count_rigid,
    is_proper,
    is_rigid,
    repair_to_rigid,
)
from .errors import (
    BracketError,
    CapacityError,
    ConvergenceError,
    DomainError,
    MonotonicityError,
    ParameterError,
    ParseError,
    RigidColError,
)
from .fingerprint import generate_fingerprint
from .graphs import (
    degree_profile,
    format_graph,
    in_subspace,
    parse_graph,
    read_graph,
    sample_graph,
    write_graph,
)
from .model import build_profile, large_deviation_rate, log_truncation_factor, poisson_pmf
from .montecarlo import exact_first_moment, mc_first_moment
from .solver import inner_root_y1, solve_system, spiral_solve, verify_sign_pattern
from .spread import (
    build_mu_profile,
    mu_entry,
    residual,
    residual_grid,
    rotated_residual,
    script_b,
    type_fraction,
)
from .types import (
    VERSION,
    BoundReport,
    Colouring,
    ModelParams,
    MultiGraph,
    PhiSolution,
    SolverConfig,
    SpreadBox,
    SpreadVector,
    ThresholdResult,
)

__version__ = VERSION
__all__ = [
    "configure_logging",
    # model
    "ModelParams",
    "build_profile",
    "poisson_pmf",
    "large_deviation_rate",
    "log_truncation_factor",
    # spreads
    "SpreadBox",
    "SpreadVector",
    "script_b",
    "type_fraction",
    "mu_entry",
    "build_mu_profile",
    "residual",
    "rotated_residual",
    "residual_grid",
    # solver
    "SolverConfig",
    "PhiSolution",
    "solve_system",
    "spiral_solve",
    "inner_root_y1",
    "verify_sign_pattern",
    # bound
    "BoundReport",
    "ThresholdResult",
    "bound_at",
    "bound_per_vertex",
    "log_bound",
    "threshold_search",
    "scan",
    "scan_frame",
    "naive_bound",
    "naive_threshold",
    # graphs
    "MultiGraph",
    "Colouring",
    "sample_graph",
    "degree_profile",
    "in_subspace",
    "parse_graph",
    "format_graph",
    "read_graph",
    "write_graph",
    "is_proper",
    "is_rigid",
    "count_proper",
    "count_rigid",
    "repair_to_rigid",
    "colour_template",
    "mc_first_moment",
    "exact_first_moment",
    "generate_fingerprint",
    # errors
    "RigidColError",
    "ParameterError",
    "BracketError",
    "MonotonicityError",
    "ConvergenceError",
    "ParseError",
    "CapacityError",
    "DomainError",
]

logger = logging.getLogger("rigidcol")


def configure_logging(debug: bool = False) -> logging.Logger:
    """Route rigidcol debug output to stderr when ``debug`` is set.

    The handler goes on the rigidcol logger itself so it shows even when
    the root logger was configured elsewhere; it is added only once.
    """
    if debug:
        if not logger.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(logging.Formatter("%(name)s - %(levelname)s - %(message)s"))
            logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)
        logger.debug("[rigidcol] debug logging enabled (version %s)", VERSION)
    return logger
