"""
Translations from neighbouring proof formats into annotated bi-nested sequents.

Two sources are supported:

* tree-like fully labelled sequents ``x<=y; yRz; z:A |- x:A&B``, translated
  by ``tr_labelled`` into a bi-nested sequent whose ``< >`` blocks follow the
  pre-order atoms and whose ``[ ]`` blocks follow the accessibility atoms;
* polarised nested sequents ``+A, -B, [ +C, {} ]``, translated by
  ``fl_nested`` into flat bi-nested sequents. ``{}`` marks the hole of a
  context.

The translated sequents can be handed to the prover with
``translate_and_prove``.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .config import ProverConfig
from .formula import Formula, FormulaTransformer, print_formula, run_parser
from .models import IKProverError, SearchBudget
from .search import SearchOutcome, prove_sequent
from .sequent import (
    AnnotationSupply, BlockKind, EnrichedSequent, Path, Sequent, SequentSyntaxError,
    print_sequent, renumber, replace_component,
)
from .utils import natural_sort_key

logger = logging.getLogger(__name__)

_ACC_ATOM = re.compile(r"^(\w+?)\s*R\s*(\w+)$")


class TranslationError(IKProverError):
    """Raised for input outside the translatable fragment."""


# -- labelled sequents ------------------------------------------------------

class RelKind(Enum):
    """The two kinds of relational atoms."""
    LEQ = "<="
    ACC = "R"


@dataclass(frozen=True)
class RelAtom:
    kind: RelKind
    source: str
    target: str

    def __str__(self) -> str:
        if self.kind is RelKind.LEQ:
            return f"{self.source}<={self.target}"
        return f"{self.source}R{self.target}"


LabelledFormula = Tuple[str, Formula]


@dataclass(frozen=True)
class LabelledSequent:
    """``rel, left |- right`` with every formula carrying a label."""
    rel_atoms: FrozenSet[RelAtom] = frozenset()
    left: FrozenSet[LabelledFormula] = frozenset()
    right: FrozenSet[LabelledFormula] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rel_atoms", frozenset(self.rel_atoms))
        object.__setattr__(self, "left", frozenset(self.left))
        object.__setattr__(self, "right", frozenset(self.right))

    def __str__(self) -> str:
        def fmls(side: FrozenSet[LabelledFormula]) -> List[str]:
            ordered = sorted(side, key=lambda lf: (natural_sort_key(lf[0]), print_formula(lf[1])))
            return [f"{label}:{print_formula(f)}" for label, f in ordered]

        rel = sorted(self.rel_atoms, key=lambda a: (natural_sort_key(a.source),
                                                    natural_sort_key(a.target), a.kind.value))
        left = "; ".join([str(a) for a in rel] + fmls(self.left))
        right = "; ".join(fmls(self.right))
        return " ".join(p for p in (left, "|-", right) if p)

    @property
    def relation_labels(self) -> FrozenSet[str]:
        found: Set[str] = set()
        for atom in self.rel_atoms:
            found.update((atom.source, atom.target))
        return frozenset(found)

    @property
    def formula_labels(self) -> FrozenSet[str]:
        return frozenset(label for label, _ in self.left | self.right)

    def graph(self) -> nx.MultiDiGraph:
        """Labels as nodes, one edge per relational atom, keyed by its kind."""
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.relation_labels | self.formula_labels)
        for atom in self.rel_atoms:
            g.add_edge(atom.source, atom.target, key=atom.kind)
        return g


@dataclass
class _Side:
    rel: List[RelAtom] = field(default_factory=list)
    fmls: List[LabelledFormula] = field(default_factory=list)


class LabelledTransformer(FormulaTransformer):
    """Builds labelled sequents; relational atoms may only appear on the left."""

    def leq_atom(self, items):
        return RelAtom(RelKind.LEQ, str(items[0]), str(items[1]))

    def acc_atom(self, items):
        match = _ACC_ATOM.match(str(items[0]).strip())
        if match is None:
            raise TranslationError(f"malformed accessibility atom {str(items[0])!r}")
        return RelAtom(RelKind.ACC, match.group(1), match.group(2))

    def labelled_formula(self, items):
        return (str(items[0]), items[1])

    def labelled_items(self, items):
        side = _Side()
        for item in items:
            if isinstance(item, RelAtom):
                side.rel.append(item)
            else:
                side.fmls.append(item)
        return side

    def labelled(self, items):
        left, right = (side or _Side() for side in items)
        if right.rel:
            raise TranslationError(
                f"relational atoms belong on the left, found {', '.join(map(str, right.rel))}"
            )
        return LabelledSequent(frozenset(left.rel), frozenset(left.fmls), frozenset(right.fmls))


def parse_labelled(text: str) -> LabelledSequent:
    """
    Parse ``x<=y; yRz; z:A |- x:A&B``.

    Items on each side are separated by ``;`` or ``,``.

    Raises:
        SequentSyntaxError: If the text is malformed
        TranslationError: If a relational atom occurs right of ``|-``
    """
    return run_parser(text, "labelled", LabelledTransformer(), error_cls=SequentSyntaxError)


def is_tree_like(ls: LabelledSequent) -> Optional[str]:
    """
    The rooted label of ``ls``, or None when ``ls`` is not tree-like.

    The rooted label is the unique label of the formula part from which
    every label of the relational atoms is reachable, and every formula
    label is either a relational label or the root itself.
    """
    g = ls.graph()
    rel_labels = ls.relation_labels
    candidates = []
    for x in sorted(ls.formula_labels, key=natural_sort_key):
        if not ls.formula_labels <= rel_labels | {x}:
            continue
        reachable = nx.descendants(g, x) | {x}
        if rel_labels <= reachable:
            candidates.append(x)
    if len(candidates) != 1:
        logger.debug(f"{ls} has {len(candidates)} rooted label candidates")
        return None
    return candidates[0]


def _check_tree(ls: LabelledSequent, root: str) -> None:
    incoming: Dict[str, List[RelAtom]] = {}
    for atom in ls.rel_atoms:
        incoming.setdefault(atom.target, []).append(atom)
    if root in incoming:
        raise TranslationError(f"rooted label {root} has incoming atom {incoming[root][0]}")
    for label, atoms in sorted(incoming.items(), key=lambda item: natural_sort_key(item[0])):
        if len(atoms) > 1:
            listed = ", ".join(sorted(map(str, atoms)))
            raise TranslationError(f"label {label} is reached more than once ({listed}); not a tree")


def tr_labelled(ls: LabelledSequent) -> Sequent:
    """
    Translate a tree-like labelled sequent into an annotated bi-nested sequent.

    Each label becomes one component. Direct pre-order successors become
    implication blocks and direct accessibility successors become modal
    blocks, siblings in natural label order. Annotations number the labels
    in pre-order from the root, implication children first.

    Raises:
        TranslationError: If ``ls`` is not tree-like or its atoms do not form a tree
    """
    root = is_tree_like(ls)
    if root is None:
        raise TranslationError(f"not tree-like: {ls}")
    _check_tree(ls, root)

    ante: Dict[str, Set[Formula]] = {}
    succ: Dict[str, Set[Formula]] = {}
    for label, f in ls.left:
        ante.setdefault(label, set()).add(f)
    for label, f in ls.right:
        succ.setdefault(label, set()).add(f)
    children: Dict[Tuple[str, RelKind], List[str]] = {}
    for atom in ls.rel_atoms:
        children.setdefault((atom.source, atom.kind), []).append(atom.target)

    supply = AnnotationSupply()

    def build(label: str) -> Sequent:
        ann = supply.take()
        below = {}
        for kind in (RelKind.LEQ, RelKind.ACC):
            ordered = sorted(children.get((label, kind), []), key=natural_sort_key)
            below[kind] = tuple(build(child) for child in ordered)
        return Sequent(ann, frozenset(ante.get(label, ())), frozenset(succ.get(label, ())),
                       below[RelKind.LEQ], below[RelKind.ACC])

    result = build(root)
    logger.info(f"Translated labelled sequent rooted at {root}: {print_sequent(result)}")
    return result


# -- polarised nested sequents ----------------------------------------------

@dataclass(frozen=True)
class PolarisedNestedSequent:
    """
    A node of a polarised nested sequent: input formulas, output formulas,
    modal children and, for contexts, whether the hole sits here.
    """
    inputs: Tuple[Formula, ...] = ()
    outputs: Tuple[Formula, ...] = ()
    children: Tuple["PolarisedNestedSequent", ...] = ()
    hole: bool = False

    def __str__(self) -> str:
        items = ["{}"] if self.hole else []
        items += [f"+{print_formula(f)}" for f in self.inputs]
        items += [f"-{print_formula(f)}" for f in self.outputs]
        items += [f"[ {child} ]" if str(child) else "[ ]" for child in self.children]
        return ", ".join(items)

    @property
    def depth(self) -> int:
        return max((child.depth + 1 for child in self.children), default=0)

    def hole_count(self) -> int:
        return int(self.hole) + sum(child.hole_count() for child in self.children)

    def hole_path(self) -> Optional[Tuple[int, ...]]:
        """Child indices leading to the hole, or None without one."""
        if self.hole:
            return ()
        for i, child in enumerate(self.children):
            below = child.hole_path()
            if below is not None:
                return (i,) + below
        return None

    def formula_part(self) -> "PolarisedNestedSequent":
        """This node's formulas, without children or hole."""
        return PolarisedNestedSequent(self.inputs, self.outputs)


PNS = PolarisedNestedSequent


class PolarisedTransformer(FormulaTransformer):

    def input_formula(self, items):
        return PNS(inputs=(items[-1],))

    def output_formula(self, items):
        return PNS(outputs=(items[-1],))

    def hole(self, _items):
        return PNS(hole=True)

    def child(self, items):
        return ("child", items[0] if items and items[0] is not None else PNS())

    def polarised_items(self, items):
        inputs: List[Formula] = []
        outputs: List[Formula] = []
        children: List[PNS] = []
        holes = 0
        for item in items:
            if isinstance(item, tuple):
                children.append(item[1])
                continue
            inputs.extend(item.inputs)
            outputs.extend(item.outputs)
            holes += int(item.hole)
        if holes > 1:
            raise TranslationError("a node holds at most one hole")
        return PNS(tuple(inputs), tuple(outputs), tuple(children), holes == 1)

    def polarised(self, items):
        return items[0] if items and items[0] is not None else PNS()


def parse_polarised(text: str) -> PolarisedNestedSequent:
    """
    Parse ``+A, -B, [ +C, {} ]``.

    ``+``/``•`` mark input formulas, ``-``/``∘`` output formulas, ``[ ]``
    a modal child and ``{}`` the hole of a context.
    """
    return run_parser(text, "polarised", PolarisedTransformer(), error_cls=SequentSyntaxError)


def _at(sigma: PNS, path: Sequence[int]) -> PNS:
    node = sigma
    for i in path:
        node = node.children[i]
    return node


def _replace_at(sigma: PNS, path: Sequence[int], new: PNS) -> PNS:
    if not path:
        return new
    i = path[0]
    children = list(sigma.children)
    children[i] = _replace_at(children[i], path[1:], new)
    return replace(sigma, children=tuple(children))


@dataclass(frozen=True)
class ContextualisedVariant:
    """
    A filled context split at the hole node.

    ``ancestor`` is the context with the hole node emptied down to ``{}``;
    ``node`` holds the filler's formulas together with the formulas Ξ that
    sat next to the hole; ``filler_blocks`` are the filler's children and
    ``children`` the hole node's own children in the context.
    """
    ancestor: PNS
    node: PNS
    filler_blocks: Tuple[PNS, ...]
    children: Tuple[PNS, ...]

    def plug(self) -> PNS:
        """The polarised nested sequent this variant denotes."""
        filled = PNS(self.node.inputs, self.node.outputs, self.filler_blocks + self.children)
        return _replace_at(self.ancestor, self.ancestor.hole_path() or (), filled)


def contextualise(ctx: PNS, filler: PNS) -> ContextualisedVariant:
    """
    Contextualised variant of ``ctx{filler}``.

    Raises:
        TranslationError: If ``ctx`` does not hold exactly one hole or the filler holds one
    """
    if ctx.hole_count() != 1:
        raise TranslationError(f"a context needs exactly one hole, found {ctx.hole_count()}")
    if filler.hole_count():
        raise TranslationError("the filler of a context cannot hold a hole")
    path = ctx.hole_path()
    pi = _at(ctx, path)
    node = PNS(filler.inputs + pi.inputs, filler.outputs + pi.outputs)
    ancestor = _replace_at(ctx, path, PNS(hole=True))
    return ContextualisedVariant(ancestor, node, filler.children, pi.children)


def _flatten(sigma: PNS, supply: AnnotationSupply, hole_at: Optional[List[Path]] = None,
             path: Path = ()) -> Sequent:
    ann = supply.take()
    if sigma.hole and hole_at is not None:
        hole_at.append(path)
    blocks = []
    for child in sigma.children:
        child_ann = supply.peek
        blocks.append(_flatten(child, supply, hole_at, path + ((BlockKind.MODAL, child_ann),)))
    return Sequent(ann, frozenset(sigma.inputs), frozenset(sigma.outputs), (), tuple(blocks))


def flatten(sigma: PNS) -> Sequent:
    """Flat bi-nested sequent of a hole-free polarised nested sequent."""
    if sigma.hole_count():
        raise TranslationError("use fl_nested for contexts")
    return _flatten(sigma, AnnotationSupply())


def fl_nested(ctx: PNS, filler: PNS) -> Sequent:
    """
    Flat bi-nested sequent of the polarised nested sequent ``ctx{filler}``.

    At depth zero the result is ``inputs => outputs``. Otherwise the
    ancestor context is translated with an empty hole node, and the hole
    node becomes ``Ψ => Θ``: Ψ the input formulas of filler and Ξ, Θ their
    output formulas followed by the translated children of the filler and
    of the hole node.

    Raises:
        TranslationError: If ``ctx`` is not a one-hole context
    """
    variant = contextualise(ctx, filler)
    whole = variant.plug()
    if whole.depth == 0:
        result = Sequent(0, frozenset(whole.inputs), frozenset(whole.outputs))
    else:
        supply = AnnotationSupply()
        hole_at: List[Path] = []
        outer = _flatten(variant.ancestor, supply, hole_at)
        path = hole_at[0]
        blocks = tuple(_flatten(b, supply) for b in variant.filler_blocks + variant.children)
        inner = Sequent(0, frozenset(variant.node.inputs), frozenset(variant.node.outputs), (), blocks)
        hole_ann = path[-1][1] if path else outer.ann
        result = replace_component(outer, path, replace(inner, ann=hole_ann))
        result = renumber(result)
    logger.info(f"Flattened {ctx} filled with {filler}: {print_sequent(result)}")
    return result


# -- chaining into the prover -----------------------------------------------

def translate_and_prove(source: Union[LabelledSequent, PolarisedNestedSequent],
                        filler: Optional[PNS] = None,
                        budget: Optional[SearchBudget] = None,
                        config: Optional[ProverConfig] = None) -> Tuple[Sequent, SearchOutcome]:
    """
    Translate ``source`` and run proof search on the result.

    Args:
        source: A LabelledSequent, or a PolarisedNestedSequent (a context when ``filler`` is given)
        filler: Filler for a polarised context
        budget: Search budget
        config: Prover configuration

    Returns:
        The translated sequent and the search outcome
    """
    if isinstance(source, LabelledSequent):
        translated = tr_labelled(source)
    elif isinstance(source, PolarisedNestedSequent):
        translated = fl_nested(source, filler) if filler is not None else flatten(source)
    else:
        raise TypeError(f"cannot translate {type(source).__name__}")
    outcome = prove_sequent(EnrichedSequent(translated), budget, config)
    logger.info(f"{print_sequent(translated)}: {outcome.verdict.value}")
    return translated, outcome
