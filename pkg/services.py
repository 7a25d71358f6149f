"""
Command services for rigidcol.
Each cmd_* function runs one command and returns its result as an
OutputRecord (or a DataFrame for the tabular scan).
"""
import logging

import rigidcol
from rigidcol.bound import scan_frame
from rigidcol.model import build_profile
from rigidcol.types import EXPLORATION_RANGE, ModelParams, SolverConfig

import utils
from models import OutputRecord

logger = logging.getLogger("rigidcol")


def _record(schema, inputs, payload):
    fingerprint = rigidcol.generate_fingerprint(schema, inputs)
    return OutputRecord(schema, payload, fingerprint)


# ---------------------------------------------------------------------------
# Bound and threshold
# ---------------------------------------------------------------------------

def cmd_bound(c, x_max=60, unit_mass=False, method="bisection"):
    """Solve the spread system at c and report F(c)."""
    utils.require_range("c", c, *EXPLORATION_RANGE)
    report = rigidcol.bound_at(c, x_max, unit_mass, SolverConfig(method=method))
    inputs = {"c": c, "x_max": x_max, "unit_mass": unit_mass, "method": method}
    logger.debug("[cli] bound c=%s F=%.15g", c, report.f_value)
    return _record("bound", inputs, {
        "c": c,
        "x_max": x_max,
        "phi0": report.phi.phi0,
        "phi1": report.phi.phi1,
        "phi2": report.phi.phi2,
        "residual_norm": report.residual_norm,
        "f_value": report.f_value,
        "log_f": report.log_f,
        "log_f_alt": report.log_f_alt,
        "log_truncation_factor": report.log_truncation_factor,
        "naive_bound": rigidcol.naive_bound(c),
    })


def cmd_threshold(x_max=60, tol=1e-4):
    """Locate c* where F crosses 1."""
    result = rigidcol.threshold_search(x_max=x_max, tol_c=tol)
    return _record("threshold", {"x_max": x_max, "tol": tol}, {
        "c_star": result.c_star,
        "c_lo": result.c_lo,
        "c_hi": result.c_hi,
        "f_lo": result.f_lo,
        "f_hi": result.f_hi,
        "iterations": result.iterations,
        "x_max": result.x_max,
        "tol": result.tol_c,
        "naive_threshold": rigidcol.naive_threshold(),
    })


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------

def cmd_scan(c_lo, c_hi, steps, x_max=60, jobs=1):
    """F(c) and phi(c) over an even c grid, one row per density."""
    reports = rigidcol.scan(c_lo, c_hi, steps, x_max=x_max, jobs=jobs)
    return scan_frame(reports)


def cmd_residual_grid(c, x_max=60, points=41):
    """K0 and K1 over the admissible box at one density."""
    utils.require_range("c", c, *EXPLORATION_RANGE)
    params = ModelParams(c=c, x_max=x_max)
    return rigidcol.residual_grid(params, build_profile(params), SolverConfig(), points)


# ---------------------------------------------------------------------------
# Graph lab
# ---------------------------------------------------------------------------

def cmd_rigid_count(path):
    """Count proper and rigid colourings of the graph stored at path."""
    graph = rigidcol.read_graph(path)
    proper = rigidcol.count_proper(graph)
    rigid = rigidcol.count_rigid(graph)
    return _record("rigid_count", {"graph": rigidcol.format_graph(graph)}, {
        "path": path,
        "n": graph.n,
        "m": graph.m,
        "proper": proper,
        "rigid": rigid,
    })


def cmd_mc(n, m, c, epsilon=0.05, x_max=60, samples=1000, seed=0, jobs=1):
    """Monte Carlo estimate of the restricted first moment E[X]."""
    utils.require_positive_int("samples", samples)
    params = ModelParams(c=c, x_max=x_max, epsilon=epsilon)
    estimate = rigidcol.mc_first_moment(n, m, params, samples, seed, jobs=jobs)
    inputs = {"n": n, "m": m, "c": c, "epsilon": epsilon, "x_max": x_max,
              "samples": samples, "seed": seed}
    return _record("mc", inputs, {
        "n": n,
        "m": m,
        "c": c,
        "epsilon": epsilon,
        "x_max": x_max,
        "samples": samples,
        "seed": seed,
        "estimate": estimate.estimate,
        "stderr": estimate.stderr,
        "in_subspace_fraction": estimate.in_subspace_fraction,
    })


def cmd_sample(n, m, seed, out=None):
    """Sample G(n, m); returns the graph and a record describing it."""
    graph = rigidcol.sample_graph(n, m, seed)
    if out:
        rigidcol.write_graph(graph, out)
    degrees = graph.degrees()
    record = _record("sample", {"n": n, "m": m, "seed": seed}, {
        "n": n,
        "m": m,
        "seed": seed,
        "path": out,
        "max_degree": int(degrees.max()),
        "loops": sum(1 for u, v in graph.edges if u == v),
    })
    return graph, record
