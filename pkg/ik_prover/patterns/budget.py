"""
Budget guard for proof search.
Trips when the rule-application count or the wall-clock time runs out.
"""

import time
import logging
import threading
from enum import Enum
from typing import Any, Dict, Optional

from ..core.models import IKProverError, SearchBudget

logger = logging.getLogger(__name__)


class BudgetState(Enum):
    """Budget guard states."""
    OPEN = "open"            # charges accepted
    EXHAUSTED = "exhausted"  # every further charge is rejected


class BudgetExceededError(IKProverError):
    """Raised when a search runs out of rule applications or time."""

    def __init__(self, reason: str, rule_applications: int, elapsed_seconds: float):
        self.reason = reason
        self.rule_applications = rule_applications
        self.elapsed_seconds = elapsed_seconds
        super().__init__(
            f"Search budget exceeded ({reason}) after {rule_applications} rule applications "
            f"and {elapsed_seconds:.3f}s"
        )


class BudgetGuard:
    """
    Guard charging rule applications against a SearchBudget.

    The guard has two states:
    - OPEN: charges are accepted while both limits hold
    - EXHAUSTED: the first failing charge trips the guard; later charges fail fast
    """

    def __init__(self, budget: Optional[SearchBudget] = None, clock=time.monotonic):
        """
        Initialize the guard.

        Args:
            budget: Limits to enforce; defaults to SearchBudget()
            clock: Monotonic time source, replaceable in tests
        """
        self.budget = budget or SearchBudget()
        self._clock = clock
        self._state = BudgetState.OPEN
        self._lock = threading.RLock()
        self.started_at = clock()
        self.rule_applications = 0
        self.reason: Optional[str] = None

    @property
    def state(self) -> BudgetState:
        return self._state

    @property
    def elapsed(self) -> float:
        return self._clock() - self.started_at

    def is_exhausted(self) -> bool:
        return self._state is BudgetState.EXHAUSTED

    def charge(self, count: int = 1) -> None:
        """
        Account for ``count`` rule applications.

        Raises:
            BudgetExceededError: If either limit is passed
        """
        with self._lock:
            if self._state is BudgetState.EXHAUSTED:
                raise self._error()
            if self.rule_applications + count > self.budget.max_rule_applications:
                self._trip("rule applications")
            self.rule_applications += count
            self.check_time()

    def check_time(self) -> None:
        """Raise BudgetExceededError once the time limit has passed."""
        with self._lock:
            if self._state is BudgetState.EXHAUSTED:
                raise self._error()
            if self.elapsed > self.budget.max_seconds:
                self._trip("time")

    def _trip(self, reason: str) -> None:
        self._state = BudgetState.EXHAUSTED
        self.reason = reason
        logger.warning(
            f"Budget exhausted on {reason}: {self.rule_applications} rule applications, "
            f"{self.elapsed:.3f}s elapsed"
        )
        raise self._error()

    def _error(self) -> BudgetExceededError:
        return BudgetExceededError(self.reason or "unknown", self.rule_applications, self.elapsed)

    def get_stats(self) -> Dict[str, Any]:
        """Get guard statistics."""
        return {
            'state': self._state.value,
            'reason': self.reason,
            'rule_applications': self.rule_applications,
            'max_rule_applications': self.budget.max_rule_applications,
            'elapsed_seconds': self.elapsed,
            'max_seconds': self.budget.max_seconds,
        }

    def reset(self) -> None:
        """Restart the guard with zero usage."""
        with self._lock:
            self._state = BudgetState.OPEN
            self.reason = None
            self.rule_applications = 0
            self.started_at = self._clock()
            logger.info("Budget guard reset")
