"""
Shared data models for the prover.
Contains the verdict and leaf-status enums, search budget and statistics,
trace records, and the base error class.
"""

from typing import Optional, List, Dict, Any, Tuple
from dataclasses import dataclass, field
from enum import Enum


class IKProverError(Exception):
    """Base class for errors raised by the prover."""


class Verdict(Enum):
    """Outcome of a proof search."""
    PROVABLE = "provable"
    UNPROVABLE = "unprovable"
    BUDGET_EXCEEDED = "budget_exceeded"


class LeafStatus(Enum):
    """Status of a derivation node that has no premises."""
    AXIOMATIC = "axiomatic"
    SATURATED = "saturated"  # global-saturated, yields a countermodel
    OPEN = "open"            # not expanded (yet)
    INTERNAL = "internal"    # node has a rule instance with premises


class TraceKind(Enum):
    """Kinds of trace records emitted by the search."""
    RULE = "rule"
    BLOCK = "block"


@dataclass(frozen=True)
class SearchBudget:
    """Safety net on proof search effort."""
    max_rule_applications: int = 1_000_000
    max_seconds: float = 60.0

    def __post_init__(self) -> None:
        if self.max_rule_applications <= 0:
            raise ValueError("max_rule_applications must be positive")
        if self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")


@dataclass
class SearchStats:
    """Counters collected during one proof search."""
    rule_applications: int = 0
    per_rule: Dict[str, int] = field(default_factory=dict)
    phases: Dict[int, int] = field(default_factory=dict)
    leaves_closed: int = 0
    block_events: int = 0
    invariance_warnings: int = 0
    elapsed_seconds: float = 0.0

    def record_rule(self, rule_name: str) -> None:
        self.rule_applications += 1
        self.per_rule[rule_name] = self.per_rule.get(rule_name, 0) + 1

    def record_phase(self, phase: int) -> None:
        self.phases[phase] = self.phases.get(phase, 0) + 1

    def to_dict(self) -> Dict[str, Any]:
        """Convert statistics to dictionary."""
        return {
            'rule_applications': self.rule_applications,
            'per_rule': dict(sorted(self.per_rule.items())),
            'phases': {str(k): v for k, v in sorted(self.phases.items())},
            'leaves_closed': self.leaves_closed,
            'block_events': self.block_events,
            'invariance_warnings': self.invariance_warnings,
            'elapsed_seconds': round(self.elapsed_seconds, 6),
        }


@dataclass(frozen=True)
class TraceRecord:
    """One entry of the search trace.

    Rule records carry the applied rule, the focus path (printed), the
    annotations the rule created and the reliance pairs it added. Block
    records name the blocked component and its blocker.
    """
    kind: TraceKind
    focus: str
    rule: Optional[str] = None
    created: Tuple[int, ...] = ()
    reliance_added: Tuple[Tuple[int, int], ...] = ()
    blocked: Optional[int] = None
    blocker: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'kind': self.kind.value, 'focus': self.focus}
        if self.kind is TraceKind.RULE:
            data['rule'] = self.rule
            data['created'] = list(self.created)
            data['reliance_added'] = [list(pair) for pair in self.reliance_added]
        else:
            data['blocked'] = self.blocked
            data['blocker'] = self.blocker
        return data


@dataclass
class LoggingConfig:
    """Configuration for logging."""
    enable_logging: bool = True
    log_level: str = "WARNING"
    logger_name: str = "ik_prover"


@dataclass
class BatchResult:
    """Result line of batch mode."""
    line_number: int
    source: str
    verdict: Optional[Verdict] = None
    error: Optional[str] = None
    rule_applications: int = 0
    elapsed_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_row(self) -> List[str]:
        """Tab-separated fields of the batch output line."""
        status = self.verdict.value if self.verdict is not None else "error"
        detail = self.error if self.error is not None else str(self.rule_applications)
        return [str(self.line_number), status, self.source, detail]
