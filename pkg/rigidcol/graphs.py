"""Random multigraphs G(n, m), their degree profiles and the text file format.

A graph is an ordered list of m edges, each drawn uniformly from the n^2
ordered vertex pairs, so every edge list has probability n^(-2m). Loops
and repeated pairs are kept.

File format: a header line "n m", then one "u v" line per edge with
0-based vertex indices.
"""

from __future__ import annotations

import logging
import os
from typing import Callable

import numpy as np

from .errors import ParameterError, ParseError
from .model import build_profile
from .types import DegreeProfileEmpirical, ModelParams, MultiGraph, is_int

logger = logging.getLogger("rigidcol")


def draw_edges(rng: np.random.Generator, n: int, m: int) -> tuple[tuple[int, int], ...]:
    """m iid uniform ordered pairs from {0..n-1}^2."""
    pairs = rng.integers(0, n, size=(m, 2))
    return tuple((int(u), int(v)) for u, v in pairs)


def sample_graph(n: int, m: int, seed: int) -> MultiGraph:
    """Sample G(n, m); the same (n, m, seed) always gives the same edge list."""
    if not is_int(n) or n < 1:
        raise ParameterError(f"a graph needs n >= 1 vertices, got {n!r}")
    if not is_int(m) or m < 0:
        raise ParameterError(f"edge count must be a non-negative integer, got {m!r}")
    if not is_int(seed) or seed < 0:
        raise ParameterError(f"seed must be a non-negative integer, got {seed!r}")
    graph = MultiGraph(n, draw_edges(np.random.default_rng(seed), n, m))
    logger.debug("[graphs] sampled n=%d m=%d seed=%d", n, m, seed)
    return graph


def degree_profile(g: MultiGraph, x_max: int) -> DegreeProfileEmpirical:
    """Fractions theta_x of vertices with degree x <= x_max, plus the tail share."""
    if not is_int(x_max) or x_max < 0:
        raise ParameterError(f"x_max must be a non-negative integer, got {x_max!r}")
    counts = np.bincount(g.degrees(), minlength=x_max + 1)
    return DegreeProfileEmpirical(
        fractions=counts[: x_max + 1] / g.n,
        tail_fraction=float(counts[x_max + 1:].sum()) / g.n,
    )


def subspace_indicator(params: ModelParams) -> Callable[[MultiGraph], bool]:
    """Membership test for the degree-restricted subspace at params.

    A graph belongs when |theta_x - p_x| < epsilon for every x <= x_max.
    """
    weights = build_profile(params).weights
    x_max, epsilon = params.x_max, params.epsilon

    def indicator(g: MultiGraph) -> bool:
        theta = degree_profile(g, x_max).fractions
        return bool(np.all(np.abs(theta - weights) < epsilon))

    return indicator


def in_subspace(g: MultiGraph, params: ModelParams) -> bool:
    return subspace_indicator(params)(g)


# ── Text format ──────────────────────────────────────────────────────────────

def _int_pair(line: str, line_number: int, what: str) -> tuple[int, int]:
    fields = line.split()
    if len(fields) != 2:
        raise ParseError(f"expected {what} as two integers, got {line.strip()!r}", line_number)
    try:
        return int(fields[0]), int(fields[1])
    except ValueError:
        raise ParseError(f"expected {what} as two integers, got {line.strip()!r}", line_number) from None


def parse_graph(text: str) -> MultiGraph:
    """Parse the "n m" + edge-lines format.

    Raises:
        ParseError: malformed header or edge line, vertex out of range,
            or an edge count that disagrees with the header.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty graph file", 1)

    n, m = _int_pair(lines[0], 1, "header 'n m'")
    if n < 1:
        raise ParseError(f"vertex count must be >= 1, got {n}", 1)
    if m < 0:
        raise ParseError(f"edge count must be >= 0, got {m}", 1)

    body = lines[1:]
    edges = []
    for offset, line in enumerate(body, start=2):
        u, v = _int_pair(line, offset, "edge 'u v'")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}", offset)
        edges.append((u, v))
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges but {len(edges)} follow", len(lines))
    return MultiGraph(n, tuple(edges))


def format_graph(g: MultiGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> MultiGraph:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_graph(text)


def write_graph(g: MultiGraph, path: str) -> str:
    """Write ``g`` to ``path`` (parent directories are created) and return the path."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_graph(g))
    return path
