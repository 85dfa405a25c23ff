"""Ordered worker-pool map used wherever `--jobs` applies."""

from __future__ import annotations

import concurrent.futures
import logging
from typing import Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """
    Apply func to every item; results come back in input order.

    jobs <= 1 runs inline. Callers give each item its own rng stream, so the
    output does not depend on scheduling.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"Mapping {len(items)} items over {jobs} workers")
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, items))
