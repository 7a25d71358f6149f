"""First moment of X(G) = R(G) * [G in the degree-restricted subspace].

``mc_first_moment`` averages X over sampled graphs; ``exact_first_moment``
sums it over all n^(2m) equiprobable edge lists and is the oracle the
estimate is checked against at tiny n.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .colouring import MAX_ENUMERATION_VERTICES, count_rigid
from .errors import CapacityError, ParameterError
from .graphs import draw_edges, subspace_indicator
from .types import ModelParams, MonteCarloEstimate, MultiGraph, is_int
from .workers import map_ordered

logger = logging.getLogger("rigidcol")

# Number of edge multisets exact_first_moment will visit.
MAX_EXACT_MULTISETS = 1_000_000


def _check_size(n: int, m: int) -> None:
    if not is_int(n) or n < 1:
        raise ParameterError(f"a graph needs n >= 1 vertices, got {n!r}")
    if not is_int(m) or m < 0:
        raise ParameterError(f"edge count must be a non-negative integer, got {m!r}")
    if n > MAX_ENUMERATION_VERTICES:
        raise CapacityError(
            f"rigid colourings are enumerated only for n <= {MAX_ENUMERATION_VERTICES}, got n = {n}"
        )


def mc_first_moment(
    n: int,
    m: int,
    params: ModelParams,
    samples: int,
    seed: int,
    jobs: int = 1,
) -> MonteCarloEstimate:
    """Sample mean and standard error of X over ``samples`` graphs from G(n, m).

    Sample k draws its edges from default_rng([seed, k]), so the estimate
    is the same for every worker count. The standard error is NaN for a
    single sample.

    Raises:
        ParameterError: samples < 1 or a bad size or seed.
        CapacityError: n is beyond the enumeration guard.
    """
    _check_size(n, m)
    if not is_int(samples) or samples < 1:
        raise ParameterError(f"samples must be a positive integer, got {samples!r}")
    if not is_int(seed) or seed < 0:
        raise ParameterError(f"seed must be a non-negative integer, got {seed!r}")

    indicator = subspace_indicator(params)

    def evaluate(index: int) -> tuple[int, bool]:
        g = MultiGraph(n, draw_edges(np.random.default_rng([seed, index]), n, m))
        inside = indicator(g)
        return (count_rigid(g) if inside else 0), inside

    def evaluate_chunk(bounds: tuple[int, int]) -> list[tuple[int, bool]]:
        return [evaluate(index) for index in range(*bounds)]

    chunks = max(1, min(jobs, samples))
    edges = np.linspace(0, samples, chunks + 1).astype(int)
    pieces = map_ordered(evaluate_chunk, list(zip(edges[:-1], edges[1:])), jobs)
    results = [item for piece in pieces for item in piece]

    values = np.array([value for value, _ in results], dtype=float)
    inside = np.array([flag for _, flag in results], dtype=bool)
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.nan
    estimate = MonteCarloEstimate(
        estimate=float(values.mean()),
        stderr=stderr,
        in_subspace_fraction=float(inside.mean()),
        samples=samples,
        seed=seed,
        n=n,
        m=m,
    )
    logger.debug(
        "[mc] n=%d m=%d samples=%d estimate=%.6g stderr=%.3g inside=%.3f",
        n, m, samples, estimate.estimate, stderr, estimate.in_subspace_fraction,
    )
    return estimate


def exact_first_moment(n: int, m: int, params: ModelParams) -> Fraction:
    """Exact mean of X over all n^(2m) ordered edge lists.

    Edge lists are grouped by their multiset of unordered pairs; one
    multiset stands for m!/prod(mult!) * 2^(non-loop edges) lists.

    Raises:
        CapacityError: too many multisets, or n beyond the enumeration guard.
    """
    _check_size(n, m)
    pairs = [(u, v) for u in range(n) for v in range(u, n)]
    multisets = math.comb(len(pairs) + m - 1, m)
    if multisets > MAX_EXACT_MULTISETS:
        raise CapacityError(
            f"exact enumeration would visit {multisets} edge multisets "
            f"(limit {MAX_EXACT_MULTISETS})"
        )

    indicator = subspace_indicator(params)
    m_factorial = math.factorial(m)
    total = 0
    for chosen in combinations_with_replacement(pairs, m):
        g = MultiGraph(n, chosen)
        if not indicator(g):
            continue
        rigid = count_rigid(g)
        if not rigid:
            continue
        orderings = m_factorial
        for multiplicity in Counter(chosen).values():
            orderings //= math.factorial(multiplicity)
        orderings <<= sum(1 for u, v in chosen if u != v)
        total += orderings * rigid

    logger.debug("[mc] exact first moment over %d multisets for n=%d m=%d", multisets, n, m)
    return Fraction(total, n ** (2 * m))
