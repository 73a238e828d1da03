"""
Bi-relational models, forcing and countermodel extraction.

A model is a pre-order ``leq`` and an accessibility relation ``acc`` over a
finite set of worlds, with a hereditary valuation and the two confluence
conditions linking ``leq`` and ``acc``. Countermodels are read off a
global-saturated leaf: its non-null components become worlds.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Set, Tuple

import networkx as nx

from .calculus import blockers, is_global_saturated
from .formula import And, Atom, Bottom, Box, Dia, Formula, Imp, Or, Top, print_formula
from .models import IKProverError
from .sequent import EnrichedSequent, Sequent, components, included

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class CountermodelError(IKProverError):
    """Raised when a model cannot be built or fails its frame conditions."""


class TruthLemmaViolation(CountermodelError):
    """An extracted model disagrees with the leaf it was read from."""

    def __init__(self, component: int, formula: Formula, side: str):
        self.component = component
        self.formula = formula
        self.side = side
        expected = "forced" if side == "antecedent" else "not forced"
        super().__init__(
            f"{print_formula(formula)} in the {side} of component {component} is expected {expected}"
        )


@dataclass(frozen=True)
class FrameViolation:
    """A failed model condition with the worlds that witness it."""
    kind: str  # domain, reflexive, transitive, hereditary, fc or bc
    worlds: Tuple[Any, ...]

    def __str__(self) -> str:
        return f"{self.kind} violated at {', '.join(str(w) for w in self.worlds)}"


@dataclass(frozen=True)
class Model:
    """A finite bi-relational model with a designated root."""
    worlds: FrozenSet[int]
    leq: FrozenSet[Pair]
    acc: FrozenSet[Pair]
    val: Mapping[int, FrozenSet[str]] = field(default_factory=dict, hash=False)
    root: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "worlds", frozenset(self.worlds))
        object.__setattr__(self, "leq", frozenset(tuple(p) for p in self.leq))
        object.__setattr__(self, "acc", frozenset(tuple(p) for p in self.acc))
        object.__setattr__(self, "val", {w: frozenset(atoms) for w, atoms in self.val.items()})

    def valuation(self, w: int) -> FrozenSet[str]:
        return self.val.get(w, frozenset())

    @cached_property
    def up(self) -> Dict[int, FrozenSet[int]]:
        """``leq``-successors of every world."""
        return _successors(self.worlds, self.leq)

    @cached_property
    def succ(self) -> Dict[int, FrozenSet[int]]:
        """``acc``-successors of every world."""
        return _successors(self.worlds, self.acc)

    @cached_property
    def _truth(self) -> Dict[Formula, FrozenSet[int]]:
        return {}

    def truth_set(self, f: Formula) -> FrozenSet[int]:
        """Worlds forcing ``f``."""
        cached = self._truth.get(f)
        if cached is not None:
            return cached
        result = frozenset(self._evaluate(f))
        self._truth[f] = result
        return result

    def _evaluate(self, f: Formula) -> Iterable[int]:
        if isinstance(f, Atom):
            return (w for w in self.worlds if f.name in self.valuation(w))
        if isinstance(f, Bottom):
            return ()
        if isinstance(f, Top):
            return self.worlds
        if isinstance(f, And):
            return self.truth_set(f.left) & self.truth_set(f.right)
        if isinstance(f, Or):
            return self.truth_set(f.left) | self.truth_set(f.right)
        if isinstance(f, Imp):
            left, right = self.truth_set(f.left), self.truth_set(f.right)
            return (w for w in self.worlds if all(v not in left or v in right for v in self.up[w]))
        if isinstance(f, Box):
            body = self.truth_set(f.body)
            return (w for w in self.worlds
                    if all(self.succ[v] <= body for v in self.up[w]))
        if isinstance(f, Dia):
            body = self.truth_set(f.body)
            return (w for w in self.worlds if self.succ[w] & body)
        raise TypeError(f"not a formula: {f!r}")


def _successors(worlds: Iterable[int], pairs: Iterable[Pair]) -> Dict[int, FrozenSet[int]]:
    table: Dict[int, Set[int]] = {w: set() for w in worlds}
    for a, b in pairs:
        table.setdefault(a, set()).add(b)
    return {w: frozenset(targets) for w, targets in table.items()}


# -- frame conditions -------------------------------------------------------

def check_frame(m: Model) -> List[FrameViolation]:
    """
    All violated model conditions, in a fixed order.

    Returns:
        An empty list iff ``leq`` is a pre-order, the valuation is
        hereditary and both confluence conditions hold
    """
    violations: List[FrameViolation] = []
    worlds = m.worlds
    for a, b in sorted(m.leq | m.acc):
        if a not in worlds or b not in worlds:
            violations.append(FrameViolation("domain", (a, b)))
    for w in sorted(m.val):
        if w not in worlds:
            violations.append(FrameViolation("domain", (w,)))
    if m.root not in worlds:
        violations.append(FrameViolation("domain", (m.root,)))
    if violations:
        return violations

    up, succ = m.up, m.succ
    for w in sorted(worlds):
        if w not in up[w]:
            violations.append(FrameViolation("reflexive", (w,)))
    for a, b in sorted(m.leq):
        for c in sorted(up[b] - up[a]):
            violations.append(FrameViolation("transitive", (a, b, c)))
    for x, y in sorted(m.leq):
        if not m.valuation(x) <= m.valuation(y):
            violations.append(FrameViolation("hereditary", (x, y)))
    # x <= x2 and x R z need some z2 with x2 R z2 and z <= z2
    for x, x2 in sorted(m.leq):
        for z in sorted(succ[x]):
            if not any(z2 in up[z] for z2 in succ[x2]):
                violations.append(FrameViolation("fc", (x, x2, z)))
    # x R z and z <= z2 need some x2 with x <= x2 and x2 R z2
    for x, z in sorted(m.acc):
        for z2 in sorted(up[z]):
            if not any(z2 in succ[x2] for x2 in up[x]):
                violations.append(FrameViolation("bc", (x, z, z2)))
    return violations


def frame_is_valid(m: Model) -> bool:
    return not check_frame(m)


# -- forcing ----------------------------------------------------------------

def forces(m: Model, w: int, a: Formula) -> bool:
    """``m, w`` forces ``a``."""
    return w in m.truth_set(a)


def forces_extended(m: Model, w: int, s: Sequent) -> bool:
    """
    ``m, w`` forces the sequent ``s``.

    A sequent holds when some antecedent formula fails or some succedent
    element holds; an implication block must hold at every ``leq``-successor
    and a modal block at every ``acc``-successor. The empty sequent never holds.
    """
    if any(not forces(m, w, a) for a in s.ante):
        return True
    if any(forces(m, w, b) for b in s.succ_fmls):
        return True
    for block in s.succ_iblocks:
        if all(forces_extended(m, v, block) for v in m.up[w]):
            return True
    for block in s.succ_mblocks:
        if all(forces_extended(m, v, block) for v in m.succ[w]):
            return True
    return False


def is_valid_in(m: Model, s: Sequent) -> bool:
    """``s`` is forced at every world of ``m``."""
    return all(forces_extended(m, w, s) for w in m.worlds)


# -- countermodel extraction ------------------------------------------------

@dataclass(frozen=True)
class NullityReport:
    """Null components and, for each of them, the copies relying on it."""
    null_set: FrozenSet[int]
    copies: Mapping[int, FrozenSet[int]] = field(default_factory=dict, hash=False)


def nullity(e: EnrichedSequent) -> NullityReport:
    """Components some other component of the leaf relies on."""
    present = e.root.annotations
    pairs = [(a, b) for a, b in sorted(e.rel) if a in present and b in present]
    copies: Dict[int, Set[int]] = {}
    for original, copy in pairs:
        copies.setdefault(original, set()).add(copy)
    repeated = sorted(a for a, found in copies.items() if len(found) > 1)
    if repeated:
        logger.warning(f"Components {repeated} have more than one copy relying on them")
    return NullityReport(frozenset(copies), {a: frozenset(found) for a, found in copies.items()})


def _preorder_closure(worlds: Iterable[int], base: Iterable[Pair]) -> FrozenSet[Pair]:
    graph = nx.DiGraph()
    graph.add_nodes_from(worlds)
    graph.add_edges_from(base)
    return frozenset((u, v) for u in graph.nodes for v in nx.descendants(graph, u) | {u})


def extract_countermodel(e: EnrichedSequent, verify: bool = True) -> Model:
    """
    Read the countermodel off a global-saturated leaf.

    Args:
        e: The leaf with its reliance pairs
        verify: Run check_frame and check_truth_lemma on the result

    Returns:
        The model whose worlds are the leaf's non-null component annotations

    Raises:
        CountermodelError: If the leaf is not global-saturated or the model
            fails a frame condition
        TruthLemmaViolation: If a world disagrees with its component
    """
    if not is_global_saturated(e):
        raise CountermodelError(f"not a global-saturated leaf: {e}")
    s = e.root
    report = nullity(e)
    comps = components(s)
    by_ann: Dict[int, Sequent] = {c.ann: c for _, c in comps}
    worlds = frozenset(a for a in by_ann if a not in report.null_set)

    ichildren: Dict[int, List[int]] = {}
    mchildren: Dict[int, List[int]] = {}
    for _, c in comps:
        ichildren[c.ann] = [b.ann for b in c.succ_iblocks]
        mchildren[c.ann] = [b.ann for b in c.succ_mblocks]

    def candidate(a: int, b: int) -> bool:
        return a in worlds and b in worlds and included(by_ann[a], by_ann[b])

    base: Set[Pair] = set()
    for a in worlds:
        for child in ichildren[a]:
            if candidate(a, child):
                base.add((a, child))
            for copy in report.copies.get(child, ()):
                if candidate(a, copy):
                    base.add((a, copy))
    for path, c in comps:
        for blocker_path in blockers(path, s):
            blocker_ann = blocker_path[-1][1] if blocker_path else s.ann
            if candidate(c.ann, blocker_ann):
                base.add((c.ann, blocker_ann))
    changed = True
    while changed:
        changed = False
        for t1, t2 in sorted(base):
            for s1 in mchildren[t1]:
                for s2 in mchildren[t2]:
                    if (s1, s2) not in base and candidate(s1, s2):
                        base.add((s1, s2))
                        changed = True

    leq = _preorder_closure(worlds, base)
    acc = frozenset((a, b) for a in worlds for b in mchildren[a] if b in worlds)
    val = {w: frozenset(f.name for f in by_ann[w].ante if isinstance(f, Atom)) for w in worlds}
    model = Model(worlds, leq, acc, val, s.ann)
    logger.info(f"Extracted countermodel with {len(worlds)} worlds from {len(by_ann)} components")

    if verify:
        violations = check_frame(model)
        if violations:
            logger.error(f"Extracted model fails frame conditions: {violations[0]}")
            raise CountermodelError(f"extracted model violates {violations[0]}")
        check_truth_lemma(e, model)
    return model


def check_truth_lemma(e: EnrichedSequent, m: Model) -> None:
    """
    Every antecedent formula of a world's component is forced there and
    every succedent formula is not.

    Raises:
        TruthLemmaViolation: For the first disagreement in pre-order
    """
    for _, c in components(e.root):
        if c.ann not in m.worlds:
            continue
        for a in sorted(c.ante, key=print_formula):
            if not forces(m, c.ann, a):
                logger.error(f"Truth lemma fails for {print_formula(a)} on the left of {c.ann}")
                raise TruthLemmaViolation(c.ann, a, "antecedent")
        for b in sorted(c.succ_fmls, key=print_formula):
            if forces(m, c.ann, b):
                logger.error(f"Truth lemma fails for {print_formula(b)} on the right of {c.ann}")
                raise TruthLemmaViolation(c.ann, b, "succedent")


# -- output formats ---------------------------------------------------------

def model_to_dict(m: Model) -> Dict[str, Any]:
    """JSON-ready form: worlds with valuations, both relations, root."""
    return {
        "worlds": [{"id": w, "val": sorted(m.valuation(w))} for w in sorted(m.worlds)],
        "leq": [[a, b] for a, b in sorted(m.leq)],
        "R": [[a, b] for a, b in sorted(m.acc)],
        "root": m.root,
    }


def model_from_dict(data: Mapping[str, Any]) -> Model:
    """
    Build a model from its JSON-ready form.

    Raises:
        CountermodelError: If the data does not have the expected shape
    """
    try:
        worlds = [int(w["id"]) for w in data["worlds"]]
        val = {int(w["id"]): frozenset(str(p) for p in w.get("val", [])) for w in data["worlds"]}
        leq = [(int(a), int(b)) for a, b in data.get("leq", [])]
        acc = [(int(a), int(b)) for a, b in data.get("R", [])]
        root = int(data["root"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CountermodelError(f"malformed model data: {exc!r}") from exc
    return Model(frozenset(worlds), frozenset(leq), frozenset(acc), val, root)


def model_graph(m: Model) -> nx.MultiDiGraph:
    """
    Both relations as one graph with ``relation`` edge labels.

    The pre-order is reduced to its covering edges when it is antisymmetric.
    """
    order = nx.DiGraph()
    order.add_nodes_from(m.worlds)
    order.add_edges_from((a, b) for a, b in m.leq if a != b)
    if nx.is_directed_acyclic_graph(order):
        order = nx.transitive_reduction(order)
    graph = nx.MultiDiGraph()
    for w in sorted(m.worlds):
        graph.add_node(w, val=sorted(m.valuation(w)), root=(w == m.root))
    graph.add_edges_from(order.edges, relation="leq")
    graph.add_edges_from(m.acc, relation="R")
    return graph


def model_to_dot(m: Model) -> str:
    """Graphviz rendering: dashed edges for the pre-order, solid for R."""
    graph = model_graph(m)
    lines = ["digraph countermodel {"]
    for w, data in sorted(graph.nodes(data=True)):
        label = f"{w}: {{{', '.join(data['val'])}}}"
        shape = "doublecircle" if data["root"] else "circle"
        lines.append(f'  {w} [label="{label}", shape={shape}];')
    for a, b, data in sorted(graph.edges(data=True), key=lambda edge: (edge[2]["relation"], edge[0], edge[1])):
        style = "dashed" if data["relation"] == "leq" else "solid"
        lines.append(f'  {a} -> {b} [label="{data["relation"]}", style={style}];')
    lines.append("}")
    return "\n".join(lines)


def model_to_text(m: Model) -> str:
    """Plain listing of worlds, valuation, pre-order and accessibility."""
    lines = [f"worlds: {' '.join(str(w) for w in sorted(m.worlds))}", f"root: {m.root}"]
    for w in sorted(m.worlds):
        lines.append(f"V({w}) = {{{', '.join(sorted(m.valuation(w)))}}}")
    strict = [f"{a}<={b}" for a, b in sorted(m.leq) if a != b]
    lines.append(f"leq: {', '.join(strict) if strict else '(reflexive only)'}")
    lines.append(f"R: {', '.join(f'{a}R{b}' for a, b in sorted(m.acc)) or '(empty)'}")
    return "\n".join(lines)
