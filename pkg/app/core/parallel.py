"""
Deterministic worker pool for parameter sweeps.
Results always come back in input order, whatever the schedule.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from app.core import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit positive value wins; otherwise STRATA_THREADS."""
    if threads is not None and threads > 0:
        return threads
    return max(1, config.STRATA_THREADS)


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    threads: Optional[int] = None,
) -> List[R]:
    """
    Apply fn to every item, possibly on a thread pool, and return the
    results in the order of items. With one worker (or one item) the work
    runs inline so tracebacks stay simple.
    """
    work = list(items)
    workers = min(resolve_threads(threads), max(1, len(work)))
    if workers == 1:
        return [fn(item) for item in work]

    logger.debug("ordered_map | pool | workers=%s | items=%s", workers, len(work))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
