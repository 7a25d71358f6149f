"""Proper and rigid 3-colourings of small multigraphs.

A proper colouring gives the endpoints of every edge distinct types, so a
loop rules colourings out altogether. It is rigid when, in addition, every
blue (0) vertex has a red (1) and a green (2) neighbour and every red
vertex has a green neighbour. Counting is exhaustive backtracking, one
connected component at a time.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import CapacityError, ParameterError
from .types import BLUE, COLOURS, GREEN, RED, Colouring, EmpiricalTemplate, MultiGraph, is_int

logger = logging.getLogger("rigidcol")

MAX_ENUMERATION_VERTICES = 20


def _check_length(g: MultiGraph, col: Colouring) -> None:
    if col.n != g.n:
        raise ParameterError(f"colouring has {col.n} entries for a graph on {g.n} vertices")


def _check_capacity(g: MultiGraph) -> None:
    if g.n > MAX_ENUMERATION_VERTICES:
        raise CapacityError(
            f"exhaustive enumeration is limited to n <= {MAX_ENUMERATION_VERTICES}, got n = {g.n}"
        )


def _locally_rigid(colour: int, neighbour_colours: Sequence[int]) -> bool:
    if colour == BLUE:
        return RED in neighbour_colours and GREEN in neighbour_colours
    if colour == RED:
        return GREEN in neighbour_colours
    return True


def is_proper(g: MultiGraph, col: Colouring) -> bool:
    _check_length(g, col)
    types = col.types
    return all(types[u] != types[v] for u, v in g.edges)


def is_rigid(g: MultiGraph, col: Colouring) -> bool:
    """Proper, and every vertex meets the neighbour requirements of its colour."""
    if not is_proper(g, col):
        return False
    types = col.types
    return all(
        _locally_rigid(types[v], [types[w] for w in neighbours])
        for v, neighbours in enumerate(g.neighbours())
    )


# ── Counting ─────────────────────────────────────────────────────────────────

def _components(adjacency: list[set[int]]) -> list[list[int]]:
    """Connected components, each listed in breadth-first order from its lowest vertex."""
    n = len(adjacency)
    rows = np.array([v for v in range(n) for _ in adjacency[v]], dtype=np.intp)
    cols = np.array([w for v in range(n) for w in adjacency[v]], dtype=np.intp)
    matrix = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    count, labels = connected_components(matrix, directed=False)
    roots = [int(np.flatnonzero(labels == k)[0]) for k in range(count)]
    return [
        breadth_first_order(matrix, root, directed=False, return_predecessors=False).tolist()
        for root in sorted(roots)
    ]


def _count_component(order: list[int], adjacency: list[set[int]], rigid: bool) -> int:
    position = {v: k for k, v in enumerate(order)}
    neighbours = [[position[w] for w in adjacency[v]] for v in order]
    earlier = [[j for j in neighbours[k] if j < k] for k in range(len(order))]
    # closes[k]: vertices whose whole neighbourhood is coloured once k is
    closes: list[list[int]] = [[] for _ in order]
    for k in range(len(order)):
        closes[max([k] + neighbours[k])].append(k)

    types = [GREEN] * len(order)

    def extend(k: int) -> int:
        if k == len(order):
            return 1
        count = 0
        for colour in COLOURS:
            if any(types[j] == colour for j in earlier[k]):
                continue
            types[k] = colour
            if rigid and not all(
                _locally_rigid(types[i], [types[j] for j in neighbours[i]]) for i in closes[k]
            ):
                continue
            count += extend(k + 1)
        return count

    return extend(0)


def _count(g: MultiGraph, rigid: bool) -> int:
    _check_capacity(g)
    if g.has_loop():
        return 0
    adjacency = g.neighbours()
    total = 1
    for component in _components(adjacency):
        total *= _count_component(component, adjacency, rigid)
        if total == 0:
            break
    return total


def count_proper(g: MultiGraph) -> int:
    """Number of proper 3-colourings.

    Raises:
        CapacityError: n exceeds the enumeration guard.
    """
    return _count(g, rigid=False)


def count_rigid(g: MultiGraph) -> int:
    """R(G), the number of rigid 3-colourings.

    Raises:
        CapacityError: n exceeds the enumeration guard.
    """
    return _count(g, rigid=True)


# ── Repair ───────────────────────────────────────────────────────────────────

def repair_to_rigid(g: MultiGraph, col: Colouring) -> Colouring:
    """Push violating vertices up until the colouring is rigid.

    Each step moves one violating vertex to the largest colour none of its
    neighbours has. The colour sum grows every step and is capped at 2n.

    Raises:
        ParameterError: ``col`` is not a proper colouring of ``g``.
    """
    if not is_proper(g, col):
        raise ParameterError("repair_to_rigid needs a proper colouring")
    adjacency = g.neighbours()
    types = list(col.types)
    steps = 0
    while True:
        violating = next(
            (
                v for v in range(g.n)
                if not _locally_rigid(types[v], [types[w] for w in adjacency[v]])
            ),
            None,
        )
        if violating is None:
            break
        taken = {types[w] for w in adjacency[violating]}
        types[violating] = max(c for c in (RED, GREEN) if c > types[violating] and c not in taken)
        steps += 1
    if steps:
        logger.debug("[graphs] repaired colouring in %d recolourings", steps)
    return Colouring(tuple(types))


# ── Templates ────────────────────────────────────────────────────────────────

def colour_template(g: MultiGraph, col: Colouring, x_max: int) -> EmpiricalTemplate:
    """Empirical mu[i, x, j] and edge-type fractions beta of a proper colouring.

    mu[i, x, j] is the share of degree-x vertices that have colour i and
    exactly j edges to colour i+1 (mod 3); vertices above x_max are left
    out. beta[i] is the share of edges joining colours i and i+1 (mod 3).
    """
    if not is_int(x_max) or x_max < 0:
        raise ParameterError(f"x_max must be a non-negative integer, got {x_max!r}")
    if not is_proper(g, col):
        raise ParameterError("colour_template needs a proper colouring")

    types = col.types
    degrees = g.degrees()
    forward = np.zeros(g.n, dtype=np.int64)
    beta = np.zeros(3)
    for u, v in g.edges:
        for a, b in ((u, v), (v, u)):
            if types[b] == (types[a] + 1) % 3:
                forward[a] += 1
        low = types[u] if types[v] == (types[u] + 1) % 3 else types[v]
        beta[low] += 1

    mu = np.zeros((3, x_max + 1, x_max + 1))
    for v in range(g.n):
        if degrees[v] <= x_max:
            mu[types[v], degrees[v], forward[v]] += 1
    class_sizes = np.bincount(degrees[degrees <= x_max], minlength=x_max + 1)
    nonempty = class_sizes > 0
    mu[:, nonempty, :] /= class_sizes[nonempty][None, :, None]
    if g.m:
        beta /= g.m
    return EmpiricalTemplate(mu=mu, beta=beta)
