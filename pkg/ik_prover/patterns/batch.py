"""
Bounded worker pool for batch mode.

Jobs run on at most ``max_workers`` threads; results come back in input
order regardless of completion order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class BatchConfig:
    max_workers: int = 1


class BatchRunner:
    """Run one function over many inputs with bounded concurrency."""

    def __init__(self, config: BatchConfig) -> None:
        self.config = config
        self._workers = max(1, config.max_workers)

    @property
    def workers(self) -> int:
        return self._workers

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Apply ``func`` to every item, keeping input order."""
        if self._workers == 1 or len(items) <= 1:
            return [func(item) for item in items]
        logger.info(f"Running {len(items)} jobs on {self._workers} workers")
        with ThreadPoolExecutor(max_workers=self._workers) as pool:
            return list(pool.map(func, items))
