"""
Terminating proof search.

The search keeps a frontier of open leaves and always works on the leftmost
one. A leaf is closed when it is axiomatic; otherwise the highest phase its
global saturation level allows is run over it. The first global-saturated
leaf ends the search with an unprovable verdict.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .calculus import (
    Derivation, RuleInstance, SaturationLevel, axiom_instance, blocked_components,
    build_instance, check_proof, component_level, is_axiomatic, is_blocked, is_global_level,
    locally_saturated, pending,
)
from .config import ProverConfig
from .formula import Formula
from .models import IKProverError, LeafStatus, SearchBudget, SearchStats, TraceKind, TraceRecord, Verdict
from .sequent import (
    AnnotationSupply, BlockKind, EnrichedSequent, Path, Sequent, ancestors, component_at, components,
    format_path, modal_closure,
)
from ..patterns.budget import BudgetExceededError, BudgetGuard

logger = logging.getLogger(__name__)


class SearchError(IKProverError):
    """Raised when the search cannot make progress on a leaf."""


class InvariantViolation(SearchError):
    """Raised when a runtime check on the search fails."""


@dataclass
class SearchOutcome:
    """Verdict of a search with the derivation built so far."""
    verdict: Verdict
    derivation: Derivation
    stats: SearchStats
    leaf: Optional[EnrichedSequent] = None
    trace: List[TraceRecord] = field(default_factory=list)
    budget_error: Optional[BudgetExceededError] = None

    @property
    def provable(self) -> bool:
        return self.verdict is Verdict.PROVABLE

    @property
    def unprovable(self) -> bool:
        return self.verdict is Verdict.UNPROVABLE

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'verdict': self.verdict.value,
            'stats': self.stats.to_dict(),
        }
        if self.leaf is not None:
            data['leaf'] = str(self.leaf)
        if self.budget_error is not None:
            data['error'] = str(self.budget_error)
        if self.trace:
            data['trace'] = [record.to_dict() for record in self.trace]
        return data


def _blocked_annotations(s: Sequent, blocked: Dict[Path, Path]) -> Dict[int, int]:
    return {component_at(s, p).ann: component_at(s, b).ann for p, b in blocked.items()}


class ProofSearch:
    """
    One proof search over an enriched start sequent.

    Fresh annotations come from a counter shared by all branches, so an
    annotation is never reused anywhere in the derivation.
    """

    def __init__(self, budget: Optional[SearchBudget] = None, config: Optional[ProverConfig] = None):
        """
        Initialize the search.

        Args:
            budget: Limits on rule applications and time; defaults to the
                budget described by ``config``
            config: Prover configuration; defaults to ProverConfig()
        """
        self.config = config or ProverConfig()
        self.budget = budget or self.config.budget()
        self.guard = BudgetGuard(self.budget)
        self.stats = SearchStats()
        self.trace: List[TraceRecord] = []
        self._supply = AnnotationSupply()

    def run(self, start: EnrichedSequent) -> SearchOutcome:
        """
        Search for a proof of ``start``.

        Returns:
            A SearchOutcome; budget exhaustion is reported as a verdict

        Raises:
            InvariantViolation: If a runtime check fails
            SearchError: If a non-saturated leaf admits no rule
        """
        logger.info(f"Starting proof search for {start}")
        self._supply.advance_past(start.used_annotations)
        root = Derivation(start)
        frontier: List[Tuple[Derivation, Dict[int, int]]] = [(root, {})]
        try:
            while frontier:
                node, blocked_before = frontier.pop()
                leaf = self._evaluate(node, blocked_before)
                if leaf is None:
                    continue
                blocked, blocked_now = leaf
                if node.status is LeafStatus.SATURATED:
                    return self._finish(Verdict.UNPROVABLE, root, node.conclusion)
                new_leaves = self._expand(node, blocked)
                for child in reversed(new_leaves):
                    frontier.append((child, blocked_now))
        except BudgetExceededError as exc:
            outcome = self._finish(Verdict.BUDGET_EXCEEDED, root)
            outcome.budget_error = exc
            return outcome
        outcome = self._finish(Verdict.PROVABLE, root)
        if self.config.check_proofs and not check_proof(root):
            logger.error("Derivation returned as a proof fails replay")
            raise InvariantViolation("derivation returned as a proof fails replay")
        return outcome

    def _finish(self, verdict: Verdict, root: Derivation,
                leaf: Optional[EnrichedSequent] = None) -> SearchOutcome:
        self.stats.elapsed_seconds = self.guard.elapsed
        logger.info(
            f"Search finished: {verdict.value} after {self.stats.rule_applications} rule applications "
            f"in {self.stats.elapsed_seconds:.3f}s"
        )
        return SearchOutcome(verdict, root, self.stats, leaf, list(self.trace))

    # -- leaves -------------------------------------------------------------

    def _evaluate(self, node: Derivation,
                  blocked_before: Dict[int, int]) -> Optional[Tuple[Dict[Path, Path], Dict[int, int]]]:
        """Close an axiomatic leaf, or return it with its blocked components."""
        self.guard.check_time()
        s = node.conclusion.root
        axiom = axiom_instance(s)
        if axiom is not None:
            node.instance = axiom
            node.status = LeafStatus.AXIOMATIC
            self.stats.leaves_closed += 1
            logger.debug(f"Closed leaf by {axiom.describe()}")
            return None
        blocked = blocked_components(s)
        blocked_now = _blocked_annotations(s, blocked)
        self._monitor_blocking(s, blocked, blocked_before, blocked_now)
        if is_global_level(s, SaturationLevel.R4, blocked):
            node.status = LeafStatus.SATURATED
            logger.info(f"Leaf is global-saturated: {node.conclusion}")
        return blocked, blocked_now

    def _monitor_blocking(self, s: Sequent, blocked: Dict[Path, Path],
                          blocked_before: Dict[int, int], blocked_now: Dict[int, int]) -> None:
        for path in blocked:
            ann = component_at(s, path).ann
            if ann in blocked_before:
                continue
            self.stats.block_events += 1
            blocker_ann = blocked_now[ann]
            logger.debug(f"Component {ann} at {format_path(path)} is blocked by {blocker_ann}")
            if self.config.trace:
                self.trace.append(TraceRecord(
                    TraceKind.BLOCK, format_path(path), blocked=ann, blocker=blocker_ann,
                ))
        lost = sorted(set(blocked_before) - set(blocked_now))
        if lost:
            self.stats.invariance_warnings += 1
            message = f"Components {lost} were blocked earlier on this branch and no longer are"
            if self.config.strict_invariants:
                logger.error(message)
                raise InvariantViolation(message)
            logger.warning(message)

    # -- phases -------------------------------------------------------------

    def _choose_phase(self, s: Sequent, blocked: Dict[Path, Path]) -> int:
        if is_global_level(s, SaturationLevel.R3, blocked):
            return 4
        if is_global_level(s, SaturationLevel.R2, blocked):
            return 3
        if is_global_level(s, SaturationLevel.R1, blocked):
            return 2
        return 1

    def select_foci(self, s: Sequent, phase: int, blocked: Dict[Path, Path]) -> List[Path]:
        """Components a phase works on, in pre-order, fixed when the phase starts."""
        level = SaturationLevel(phase)
        levels = {path: component_level(c) for path, c in components(s)}
        below = [path for path, lv in levels.items() if lv < level]
        if phase == 3:
            def open_for_r3(p: Path) -> bool:
                return levels[p] < SaturationLevel.R3 and p not in blocked
            return [p for p in below if p not in blocked
                    and not any(open_for_r3(a) for a in ancestors(p))]
        if phase == 4:
            return [p for p in below if self._inner_blocks_ready(s, p, levels, blocked)]
        return below

    @staticmethod
    def _inner_blocks_ready(s: Sequent, path: Path, levels: Dict[Path, SaturationLevel],
                            blocked: Dict[Path, Path]) -> bool:
        c = component_at(s, path)
        for m in c.succ_mblocks:
            for u in m.succ_iblocks:
                inner = path + ((BlockKind.MODAL, m.ann), (BlockKind.IMPL, u.ann))
                if levels[inner] < SaturationLevel.R4 and inner not in blocked:
                    return False
        return True

    def _expand(self, node: Derivation, blocked: Dict[Path, Path]) -> List[Derivation]:
        s = node.conclusion.root
        phase = self._choose_phase(s, blocked)
        foci = self.select_foci(s, phase, blocked)
        if not foci:
            raise SearchError(f"no component to expand in phase {phase} for {node.conclusion}")
        self.stats.record_phase(phase)
        logger.info(f"Phase {phase} on {len(foci)} component(s): {', '.join(format_path(p) for p in foci)}")

        leaves: List[Derivation] = []
        work: List[Tuple[Derivation, int]] = [(node, 0)]
        while work:
            current, index = work.pop()
            e = current.conclusion
            if index == len(foci) or is_axiomatic(e.root):
                leaves.append(current)
                continue
            focus = foci[index]
            if phase == 3 and is_blocked(focus, e.root) is not None:
                work.append((current, index + 1))
                continue
            instance = self._next_instance(e, focus, phase)
            if instance is None:
                work.append((current, index + 1))
                continue
            self._apply(current, instance, phase)
            for child in reversed(current.children):
                work.append((child, index))

        if not node.children:
            raise SearchError(f"phase {phase} made no progress on {node.conclusion}")
        self._check_phase(leaves, foci, phase)
        return leaves

    def _next_instance(self, e: EnrichedSequent, focus: Path, phase: int) -> Optional[RuleInstance]:
        group = SaturationLevel(phase)
        scope = modal_closure(e.root, focus) if phase == 1 else [(focus, component_at(e.root, focus))]
        for path, c in scope:
            todo = pending(c, group)
            if todo:
                rule, principal = todo[0]
                start = max(self._supply.peek, e.next_free_annotation())
                return build_instance(e, rule, path, principal, start)
        return None

    def _apply(self, node: Derivation, instance: RuleInstance, phase: int) -> None:
        if phase == 3 and is_blocked(instance.focus, node.conclusion.root) is not None:
            logger.error(f"R3 rule about to run on blocked component {format_path(instance.focus)}")
            raise InvariantViolation(f"{instance.describe()} on a blocked component")
        self.guard.charge()
        self._supply.advance_past(instance.created)
        self.stats.record_rule(instance.rule.value)
        logger.debug(
            f"Apply {instance.describe()}; created {list(instance.created)}"
            + (f", reliance {list(instance.reliance_added)}" if instance.reliance_added else "")
        )
        if self.config.trace:
            self.trace.append(TraceRecord(
                TraceKind.RULE, format_path(instance.focus), rule=instance.rule.value,
                created=instance.created, reliance_added=instance.reliance_added,
            ))
        node.instance = instance
        node.status = LeafStatus.INTERNAL
        node.children = [Derivation(premise) for premise in instance.premises]

    def _check_phase(self, leaves: List[Derivation], foci: List[Path], phase: int) -> None:
        """Every processed focus meets its group's conditions on every open leaf."""
        group = SaturationLevel(phase)
        for leaf in leaves:
            s = leaf.conclusion.root
            if is_axiomatic(s):
                continue
            for focus in foci:
                if phase == 3 and is_blocked(focus, s) is not None:
                    continue
                scope = modal_closure(s, focus) if phase == 1 else [(focus, component_at(s, focus))]
                if not all(locally_saturated(c, group) for _, c in scope):
                    message = f"phase {phase} left {format_path(focus)} unsaturated in {leaf.conclusion}"
                    logger.error(message)
                    raise InvariantViolation(message)


def prove_sequent(e: EnrichedSequent, budget: Optional[SearchBudget] = None,
                  config: Optional[ProverConfig] = None) -> SearchOutcome:
    """
    Run proof search on an arbitrary enriched sequent.

    Args:
        e: Start sequent with its reliance pairs
        budget: Search budget; defaults to the configured one
        config: Prover configuration

    Returns:
        The search outcome
    """
    return ProofSearch(budget, config).run(e)


def proof_search(a: Formula, budget: Optional[SearchBudget] = None,
                 config: Optional[ProverConfig] = None) -> SearchOutcome:
    """Search for a proof of ``=>{0} a`` with no reliance pairs."""
    start = EnrichedSequent(Sequent(0, frozenset(), frozenset((a,))))
    return prove_sequent(start, budget, config)
