"""
Rules of the annotated cumulative calculus, their saturation conditions,
saturation levels, blocking, and proof replay.

Every rule keeps its principal formulas and blocks in the premise, so a
rule is only worth applying while its saturation condition fails at the
focused component. Rule instances record the annotations they create so
that a finished derivation can be replayed and checked independently of
the search that produced it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import lru_cache
from typing import Any, Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .formula import BOTTOM, TOP, And, Atom, Box, Dia, Formula, Imp, Or, formula_key, print_formula
from .models import IKProverError, LeafStatus
from .sequent import (
    AnnotationSupply, BlockKind, EnrichedSequent, Path, Sequent, ancestors, component_at,
    components, copy_from, format_path, included, modal_closure, positive_part,
    replace_component, sharp_equivalent,
)

logger = logging.getLogger(__name__)


class ProofCheckError(IKProverError):
    """Raised by verify_proof for the first node that fails replay."""

    def __init__(self, message: str, path: Sequence[int] = ()):
        self.path = tuple(path)
        where = "/".join(str(i) for i in self.path) or "root"
        super().__init__(f"{message} (node {where})")


class RuleId(Enum):
    """Rules of the calculus, in the order instances are tried."""
    BotL = "BotL"
    TopR = "TopR"
    Id = "Id"
    AndL = "AndL"
    AndR = "AndR"
    OrL = "OrL"
    OrR = "OrR"
    ImpL = "ImpL"
    ImpR_in = "ImpR_in"
    ImpR_new = "ImpR_new"
    BoxL = "BoxL"
    BoxR = "BoxR"
    DiaL = "DiaL"
    DiaR = "DiaR"
    Trans = "Trans"
    InterFC = "InterFC"
    InterBC = "InterBC"

    @property
    def is_axiom(self) -> bool:
        return self in AXIOM_RULES


class SaturationLevel(IntEnum):
    """Cumulative saturation levels; also names the four rule groups."""
    NONE = 0
    R1 = 1
    R2 = 2
    R3 = 3
    R4 = 4


AXIOM_RULES = (RuleId.BotL, RuleId.TopR, RuleId.Id)

RULE_GROUPS: Dict[SaturationLevel, Tuple[RuleId, ...]] = {
    SaturationLevel.R1: (
        RuleId.AndL, RuleId.AndR, RuleId.OrL, RuleId.OrR, RuleId.ImpL,
        RuleId.BoxL, RuleId.DiaL, RuleId.DiaR,
    ),
    SaturationLevel.R2: (RuleId.Trans, RuleId.InterFC),
    SaturationLevel.R3: (RuleId.ImpR_in, RuleId.ImpR_new, RuleId.BoxR),
    SaturationLevel.R4: (RuleId.InterBC,),
}

BRANCHING_RULES = frozenset({RuleId.AndR, RuleId.OrL, RuleId.ImpL})

Principal = Tuple[Any, ...]


@dataclass(frozen=True)
class RuleInstance:
    """
    One application of a rule at a focused component.

    ``principal`` addresses what the rule acts on inside the focus: a formula,
    a formula and a modal block annotation (BoxL, DiaR), a block annotation
    (Trans) or a pair of block annotations (InterFC, InterBC).
    """
    rule: RuleId
    focus: Path
    principal: Principal
    created: Tuple[int, ...] = ()
    reliance_added: Tuple[Tuple[int, int], ...] = ()
    premises: Tuple[EnrichedSequent, ...] = ()

    def describe(self) -> str:
        return f"{self.rule.value} at {format_path(self.focus)} on {_principal_text(self.principal)}"


@dataclass
class Derivation:
    """A derivation tree node: a conclusion plus either a rule instance or a leaf status."""
    conclusion: EnrichedSequent
    instance: Optional[RuleInstance] = None
    status: LeafStatus = LeafStatus.OPEN
    children: List["Derivation"] = field(default_factory=list)

    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> List["Derivation"]:
        result: List[Derivation] = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.children:
                stack.extend(reversed(node.children))
            else:
                result.append(node)
        return result

    def nodes(self) -> Iterator["Derivation"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        if not self.children:
            return 1
        return 1 + max(child.height() for child in self.children)


def _principal_text(principal: Principal) -> str:
    return ", ".join(print_formula(p) if isinstance(p, Formula) else str(p) for p in principal)


def _ordered(fmls) -> List[Formula]:
    return sorted(fmls, key=formula_key)


# -- axioms -----------------------------------------------------------------

def _axiom_principals(c: Sequent) -> List[Tuple[RuleId, Principal]]:
    found: List[Tuple[RuleId, Principal]] = []
    if BOTTOM in c.ante:
        found.append((RuleId.BotL, (BOTTOM,)))
    if TOP in c.succ_fmls:
        found.append((RuleId.TopR, (TOP,)))
    shared = [f for f in c.ante & c.succ_fmls if isinstance(f, Atom)]
    found.extend((RuleId.Id, (f,)) for f in _ordered(shared))
    return found


def axiom_instance(s: Sequent) -> Optional[RuleInstance]:
    """The first axiom instance in pre-order, if any component is axiomatic."""
    for path, c in components(s):
        found = _axiom_principals(c)
        if found:
            rule, principal = found[0]
            return RuleInstance(rule, path, principal)
    return None


@lru_cache(maxsize=1 << 16)
def is_axiomatic(s: Sequent) -> bool:
    """True iff some component has ⊥ on the left, ⊤ on the right or a shared atom."""
    return axiom_instance(s) is not None


# -- saturation conditions --------------------------------------------------
# Each function lists the principals at which a rule's condition fails in
# one component, in canonical order.

def _and_l(c: Sequent) -> List[Principal]:
    return [(f,) for f in _ordered(c.ante)
            if isinstance(f, And) and not (f.left in c.ante and f.right in c.ante)]


def _and_r(c: Sequent) -> List[Principal]:
    return [(f,) for f in _ordered(c.succ_fmls)
            if isinstance(f, And) and f.left not in c.succ_fmls and f.right not in c.succ_fmls]


def _or_l(c: Sequent) -> List[Principal]:
    return [(f,) for f in _ordered(c.ante)
            if isinstance(f, Or) and f.left not in c.ante and f.right not in c.ante]


def _or_r(c: Sequent) -> List[Principal]:
    return [(f,) for f in _ordered(c.succ_fmls)
            if isinstance(f, Or) and not (f.left in c.succ_fmls and f.right in c.succ_fmls)]


def _imp_l(c: Sequent) -> List[Principal]:
    return [(f,) for f in _ordered(c.ante)
            if isinstance(f, Imp) and f.left not in c.succ_fmls and f.right not in c.ante]


def _imp_r_unsaturated(c: Sequent) -> List[Imp]:
    result = []
    for f in _ordered(c.succ_fmls):
        if not isinstance(f, Imp):
            continue
        if f.left in c.ante and f.right in c.succ_fmls:
            continue
        if any(f.left in b.ante and f.right in b.succ_fmls for b in c.succ_iblocks):
            continue
        result.append(f)
    return result


def _imp_r_in(c: Sequent) -> List[Principal]:
    return [(f,) for f in _imp_r_unsaturated(c) if f.left in c.ante]


def _imp_r_new(c: Sequent) -> List[Principal]:
    return [(f,) for f in _imp_r_unsaturated(c) if f.left not in c.ante]


def _box_l(c: Sequent) -> List[Principal]:
    return [(f, m.ann) for f in _ordered(c.ante) if isinstance(f, Box)
            for m in c.succ_mblocks if f.body not in m.ante]


def _box_r(c: Sequent) -> List[Principal]:
    result = []
    for f in _ordered(c.succ_fmls):
        if not isinstance(f, Box):
            continue
        if any(f.body in m.succ_fmls for m in c.succ_mblocks):
            continue
        if any(f.body in m.succ_fmls for i in c.succ_iblocks for m in i.succ_mblocks):
            continue
        result.append((f,))
    return result


def _dia_l(c: Sequent) -> List[Principal]:
    return [(f,) for f in _ordered(c.ante)
            if isinstance(f, Dia) and not any(f.body in m.ante for m in c.succ_mblocks)]


def _dia_r(c: Sequent) -> List[Principal]:
    return [(f, m.ann) for f in _ordered(c.succ_fmls) if isinstance(f, Dia)
            for m in c.succ_mblocks if f.body not in m.succ_fmls]


def _trans(c: Sequent) -> List[Principal]:
    return [(i.ann,) for i in c.succ_iblocks if not c.ante <= i.ante]


def _inter_fc(c: Sequent) -> List[Principal]:
    return [(i.ann, m.ann) for i in c.succ_iblocks for m in c.succ_mblocks
            if not any(included(m, target) for target in i.succ_mblocks)]


def _inter_bc(c: Sequent) -> List[Principal]:
    return [(m.ann, u.ann) for m in c.succ_mblocks for u in m.succ_iblocks
            if not any(included(u, s2) for i in c.succ_iblocks for s2 in i.succ_mblocks)]


def _axiom_condition(rule: RuleId) -> Callable[[Sequent], List[Principal]]:
    def violations(c: Sequent) -> List[Principal]:
        return [p for r, p in _axiom_principals(c) if r is rule]
    return violations


_VIOLATIONS: Dict[RuleId, Callable[[Sequent], List[Principal]]] = {
    RuleId.BotL: _axiom_condition(RuleId.BotL),
    RuleId.TopR: _axiom_condition(RuleId.TopR),
    RuleId.Id: _axiom_condition(RuleId.Id),
    RuleId.AndL: _and_l,
    RuleId.AndR: _and_r,
    RuleId.OrL: _or_l,
    RuleId.OrR: _or_r,
    RuleId.ImpL: _imp_l,
    RuleId.ImpR_in: _imp_r_in,
    RuleId.ImpR_new: _imp_r_new,
    RuleId.BoxL: _box_l,
    RuleId.BoxR: _box_r,
    RuleId.DiaL: _dia_l,
    RuleId.DiaR: _dia_r,
    RuleId.Trans: _trans,
    RuleId.InterFC: _inter_fc,
    RuleId.InterBC: _inter_bc,
}


@lru_cache(maxsize=1 << 16)
def pending(c: Sequent, group: SaturationLevel) -> Tuple[Tuple[RuleId, Principal], ...]:
    """Unsaturated (rule, principal) pairs of one group at one component, in order."""
    return tuple((rule, p) for rule in RULE_GROUPS[group] for p in _VIOLATIONS[rule](c))


def locally_saturated(c: Sequent, group: SaturationLevel) -> bool:
    """The group's conditions hold at ``c`` itself (modal descendants not consulted)."""
    return not pending(c, group)


def saturated_for(rule: RuleId, focus: Path, s: Sequent) -> bool:
    """The saturation condition of ``rule`` holds at the component at ``focus``."""
    return not _VIOLATIONS[rule](component_at(s, focus))


@lru_cache(maxsize=1 << 16)
def _level(c: Sequent) -> SaturationLevel:
    if not all(locally_saturated(t, SaturationLevel.R1) for _, t in modal_closure(c)):
        return SaturationLevel.NONE
    for group in (SaturationLevel.R2, SaturationLevel.R3, SaturationLevel.R4):
        if not locally_saturated(c, group):
            return SaturationLevel(group - 1)
    return SaturationLevel.R4


def component_level(c: Sequent) -> SaturationLevel:
    """Saturation level of a component, R1 also covering its modal descendants."""
    return _level(c)


def saturation_level(focus: Path, s: Sequent) -> SaturationLevel:
    """Highest level whose cumulative conditions hold at the focused component."""
    return _level(component_at(s, focus))


def blockers(focus: Path, s: Sequent) -> List[Path]:
    """
    Every blocker of the component at ``focus``, nearest first.

    Candidates are the proper ancestors reached through implication blocks
    only; a candidate blocks when it is R3-saturated and sharp-equivalent
    to the focus.
    """
    target = component_at(s, focus)
    return [candidate for candidate in ancestors(focus)
            if _level(component_at(s, candidate)) >= SaturationLevel.R3
            and sharp_equivalent(component_at(s, candidate), target)]


def is_blocked(focus: Path, s: Sequent) -> Optional[Path]:
    """The nearest blocker of the component at ``focus``, if any."""
    found = blockers(focus, s)
    return found[0] if found else None


def blocked_components(s: Sequent) -> Dict[Path, Path]:
    """Map from each blocked component's path to its nearest blocker."""
    result: Dict[Path, Path] = {}
    for path, _ in components(s):
        blocker = is_blocked(path, s)
        if blocker is not None:
            result[path] = blocker
    return result


def is_global_level(s: Sequent, level: SaturationLevel, blocked: Optional[Dict[Path, Path]] = None) -> bool:
    """Every component reaches ``level`` or is blocked."""
    if blocked is None:
        blocked = blocked_components(s)
    return all(_level(c) >= level or path in blocked for path, c in components(s))


def is_global_saturated(e: EnrichedSequent) -> bool:
    """Every component is R4-saturated or blocked, and the sequent is not axiomatic."""
    if is_axiomatic(e.root):
        return False
    return is_global_level(e.root, SaturationLevel.R4)


# -- rule application -------------------------------------------------------

def _copy_reliance(rel: FrozenSet[Tuple[int, int]],
                   pairs: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
    """
    Reliance pairs added by an inter_bc copy.

    Each copied component relies on its original. A pair ``(a, b)`` already
    inside the copied block is repeated between the copies of ``a`` and
    ``b``; ``a`` keeps ``b`` as its only copy.
    """
    image = dict(pairs)
    inner = [(a, b) for a, b in sorted(rel) if a in image and b in image]
    has_copy = {a for a, _ in inner}
    fresh = tuple(p for p in pairs if p[0] not in has_copy)
    return fresh + tuple((image[a], image[b]) for a, b in inner)


def _premises(e: EnrichedSequent, rule: RuleId, focus: Path, principal: Principal,
              supply: AnnotationSupply) -> Tuple[List[Sequent], Tuple[int, ...], Tuple[Tuple[int, int], ...]]:
    s = e.root
    c = component_at(s, focus)
    created: List[int] = []
    reliance: Tuple[Tuple[int, int], ...] = ()

    def put(new_c: Sequent) -> Sequent:
        return replace_component(s, focus, new_c)

    def put_block(kind: BlockKind, ann: int, new_block: Sequent) -> Sequent:
        return replace_component(s, focus + ((kind, ann),), new_block)

    f = principal[0]
    if rule is RuleId.AndL:
        results = [put(c.with_ante((f.left, f.right)))]
    elif rule is RuleId.AndR:
        results = [put(c.with_succ_fmls((f.left,))), put(c.with_succ_fmls((f.right,)))]
    elif rule is RuleId.OrL:
        results = [put(c.with_ante((f.left,))), put(c.with_ante((f.right,)))]
    elif rule is RuleId.OrR:
        results = [put(c.with_succ_fmls((f.left, f.right)))]
    elif rule is RuleId.ImpL:
        results = [put(c.with_succ_fmls((f.left,))), put(c.with_ante((f.right,)))]
    elif rule is RuleId.ImpR_in:
        results = [put(c.with_succ_fmls((f.right,)))]
    elif rule is RuleId.ImpR_new:
        k = supply.take()
        created.append(k)
        results = [put(c.with_iblock(Sequent(k, frozenset((f.left,)), frozenset((f.right,)))))]
    elif rule is RuleId.BoxL:
        m = c.block(BlockKind.MODAL, principal[1])
        results = [put_block(BlockKind.MODAL, m.ann, m.with_ante((f.body,)))]
    elif rule is RuleId.BoxR:
        k = supply.take()
        h = supply.take()
        created.extend((k, h))
        inner = Sequent(h, frozenset(), frozenset((f.body,)))
        results = [put(c.with_iblock(Sequent(k, succ_mblocks=(inner,))))]
    elif rule is RuleId.DiaL:
        k = supply.take()
        created.append(k)
        results = [put(c.with_mblock(Sequent(k, frozenset((f.body,)))))]
    elif rule is RuleId.DiaR:
        m = c.block(BlockKind.MODAL, principal[1])
        results = [put_block(BlockKind.MODAL, m.ann, m.with_succ_fmls((f.body,)))]
    elif rule is RuleId.Trans:
        i = c.block(BlockKind.IMPL, principal[0])
        results = [put_block(BlockKind.IMPL, i.ann, i.with_ante(c.ante))]
    elif rule is RuleId.InterFC:
        i = c.block(BlockKind.IMPL, principal[0])
        m = c.block(BlockKind.MODAL, principal[1])
        copy, pairs = copy_from(positive_part(m), supply)
        created.extend(new for _, new in pairs)
        results = [put_block(BlockKind.IMPL, i.ann, i.with_mblock(copy))]
    elif rule is RuleId.InterBC:
        m = c.block(BlockKind.MODAL, principal[0])
        u = m.block(BlockKind.IMPL, principal[1])
        k = supply.take()
        copy, pairs = copy_from(u, supply)
        created.append(k)
        created.extend(new for _, new in pairs)
        reliance = _copy_reliance(e.rel, pairs)
        results = [put(c.with_iblock(Sequent(k, succ_mblocks=(copy,))))]
    else:
        raise ValueError(f"{rule.value} has no premises")
    return results, tuple(created), reliance


def _side_condition(c: Sequent, rule: RuleId, principal: Principal) -> Optional[str]:
    """Why ``principal`` is not a valid principal of ``rule`` in ``c``, or None."""
    f = principal[0] if principal else None
    expected = {
        RuleId.AndL: (And, c.ante), RuleId.AndR: (And, c.succ_fmls),
        RuleId.OrL: (Or, c.ante), RuleId.OrR: (Or, c.succ_fmls),
        RuleId.ImpL: (Imp, c.ante), RuleId.ImpR_in: (Imp, c.succ_fmls),
        RuleId.ImpR_new: (Imp, c.succ_fmls), RuleId.BoxL: (Box, c.ante),
        RuleId.BoxR: (Box, c.succ_fmls), RuleId.DiaL: (Dia, c.ante),
        RuleId.DiaR: (Dia, c.succ_fmls),
    }
    if rule in expected:
        kind, side = expected[rule]
        if not isinstance(f, kind) or f not in side:
            return f"principal {_principal_text(principal)} is not a matching {kind.__name__} formula of the focus"
    if rule is RuleId.ImpR_in and f.left not in c.ante:
        return "ImpR_in needs the antecedent of the implication on the left"
    if rule is RuleId.ImpR_new and f.left in c.ante:
        return "ImpR_new needs the antecedent of the implication absent from the left"
    try:
        if rule in (RuleId.BoxL, RuleId.DiaR):
            c.block(BlockKind.MODAL, principal[1])
        elif rule is RuleId.Trans:
            c.block(BlockKind.IMPL, principal[0])
        elif rule is RuleId.InterFC:
            c.block(BlockKind.IMPL, principal[0])
            c.block(BlockKind.MODAL, principal[1])
        elif rule is RuleId.InterBC:
            c.block(BlockKind.MODAL, principal[0]).block(BlockKind.IMPL, principal[1])
    except IKProverError as exc:
        return str(exc)
    return None


def build_instance(e: EnrichedSequent, rule: RuleId, focus: Path, principal: Principal,
                   start: int) -> RuleInstance:
    """Build one instance, drawing fresh annotations from ``start`` upwards."""
    roots, created, reliance = _premises(e, rule, focus, principal, AnnotationSupply(start))
    rel = e.rel | frozenset(reliance)
    premises = tuple(EnrichedSequent(root, rel) for root in roots)
    return RuleInstance(rule, focus, principal, created, reliance, premises)


def instances_at(e: EnrichedSequent, focus: Path, group: SaturationLevel,
                 start: Optional[int] = None) -> List[RuleInstance]:
    """
    Non-redundant instances of one group's rules at one component.

    All instances draw fresh annotations from the same point, at least
    ``start`` and past every annotation in use.
    """
    first = e.next_free_annotation()
    if start is not None:
        first = max(first, start)
    c = component_at(e.root, focus)
    return [build_instance(e, rule, focus, p, first) for rule, p in pending(c, group)]


def applicable_instances(e: EnrichedSequent, group: SaturationLevel,
                         start: Optional[int] = None) -> List[RuleInstance]:
    """
    All non-redundant instances of a group over every component, in
    pre-order of focus, then rule order, then principal order.
    """
    result: List[RuleInstance] = []
    for path, _ in components(e.root):
        result.extend(instances_at(e, path, group, start))
    return result


def apply_instance(e: EnrichedSequent, instance: RuleInstance) -> Tuple[EnrichedSequent, ...]:
    """
    Replay ``instance`` on ``e`` and return the premises it yields.

    Raises:
        ProofCheckError: If the instance does not fit ``e``
    """
    if instance.rule.is_axiom:
        return ()
    try:
        c = component_at(e.root, instance.focus)
    except IKProverError as exc:
        raise ProofCheckError(f"{instance.describe()}: {exc}") from exc
    problem = _side_condition(c, instance.rule, instance.principal)
    if problem:
        raise ProofCheckError(f"{instance.describe()}: {problem}")
    used = e.used_annotations
    if len(set(instance.created)) != len(instance.created):
        raise ProofCheckError(f"{instance.describe()}: created annotations repeat")
    stale = [a for a in instance.created if a in used]
    if stale:
        raise ProofCheckError(f"{instance.describe()}: annotations {stale} are not fresh")
    start = instance.created[0] if instance.created else e.next_free_annotation()
    replayed = build_instance(e, instance.rule, instance.focus, instance.principal, start)
    if replayed.created != instance.created:
        raise ProofCheckError(
            f"{instance.describe()}: created {list(instance.created)}, replay gives {list(replayed.created)}"
        )
    if replayed.reliance_added != instance.reliance_added:
        raise ProofCheckError(f"{instance.describe()}: reliance pairs do not match the copy")
    return replayed.premises


def verify_proof(d: Derivation) -> None:
    """
    Replay every node of ``d``.

    Raises:
        ProofCheckError: For the first node, in pre-order, that does not
            follow from its rule, or for a leaf that is not an axiom
    """
    stack: List[Tuple[Derivation, Tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        instance = node.instance
        if not node.children:
            if instance is None or not instance.rule.is_axiom:
                raise ProofCheckError("leaf is not closed by an axiom", path)
            try:
                c = component_at(node.conclusion.root, instance.focus)
            except IKProverError as exc:
                raise ProofCheckError(str(exc), path) from exc
            if (instance.rule, instance.principal) not in _axiom_principals(c):
                raise ProofCheckError(f"{instance.describe()} is not an axiom instance", path)
            continue
        if instance is None or instance.rule.is_axiom:
            raise ProofCheckError("inner node without a rule", path)
        try:
            premises = apply_instance(node.conclusion, instance)
        except ProofCheckError as exc:
            raise ProofCheckError(str(exc), path) from exc
        actual = tuple(child.conclusion for child in node.children)
        if premises != actual:
            raise ProofCheckError(f"{instance.describe()}: premises differ from the children", path)
        for index in reversed(range(len(node.children))):
            stack.append((node.children[index], path + (index,)))


def check_proof(d: Derivation) -> bool:
    """True iff ``d`` replays and every leaf is an axiom."""
    try:
        verify_proof(d)
    except ProofCheckError as exc:
        logger.info(f"Proof check failed: {exc}")
        return False
    return True


# -- serialization ----------------------------------------------------------

def _node_label(node: Derivation) -> str:
    if node.instance is not None:
        label = f"{node.instance.rule.value} at {format_path(node.instance.focus)}"
        if node.children:
            return label
        return f"{label}, {node.status.value}"
    return node.status.value


def derivation_to_text(d: Derivation) -> str:
    """Line-indented rendering, conclusion first, two spaces per level."""
    lines: List[str] = []
    stack: List[Tuple[Derivation, int]] = [(d, 0)]
    while stack:
        node, depth = stack.pop()
        lines.append(f"{'  ' * depth}{node.conclusion}    ({_node_label(node)})")
        for child in reversed(node.children):
            stack.append((child, depth + 1))
    return "\n".join(lines)


def _principal_json(principal: Principal) -> List[Any]:
    return [print_formula(p) if isinstance(p, Formula) else p for p in principal]


def derivation_to_dict(d: Derivation) -> Dict[str, Any]:
    """Structured rendering of a derivation."""
    data: Dict[str, Any] = {
        "sequent": str(d.conclusion.root),
        "rel": [list(pair) for pair in sorted(d.conclusion.rel)],
        "status": d.status.value,
    }
    if d.instance is not None:
        data["rule"] = d.instance.rule.value
        data["focus"] = format_path(d.instance.focus)
        data["principal"] = _principal_json(d.instance.principal)
        if d.instance.created:
            data["created"] = list(d.instance.created)
        if d.instance.reliance_added:
            data["reliance_added"] = [list(pair) for pair in d.instance.reliance_added]
    data["children"] = [derivation_to_dict(child) for child in d.children]
    return data
