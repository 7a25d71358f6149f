"""Ordered fan-out of independent evaluations over a thread pool."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from .errors import ParameterError

logger = logging.getLogger("rigidcol")

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Apply ``fn`` to every item and return the results in input order.

    With jobs > 1 the calls run on a pool of worker threads. Results never
    depend on the worker count; the first failing item re-raises its error.
    """
    if isinstance(jobs, bool) or not isinstance(jobs, int) or jobs < 1:
        raise ParameterError(f"jobs must be a positive integer, got {jobs!r}")
    items = list(items)
    if jobs == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    workers = min(jobs, len(items))
    logger.debug("[workers] fanning %d tasks out to %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="rigidcol-worker") as pool:
        return list(pool.map(fn, items))
