"""
Annotated set-based bi-nested sequents.

A sequent ``Γ =>{n} Δ`` carries an annotation ``n`` and a succedent made of
formulas, implication blocks ``< ... >`` and modal blocks ``[ ... ]``.
Components are addressed by paths of (block kind, annotation) steps from
the root. This module also provides the structural measures used by
saturation and blocking: the local positive part, the sharp part,
sharp-equivalence, structural inclusion and fresh annotated copies.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .formula import (
    Formula, FormulaSyntaxError, FormulaTransformer, formula_key, modal_depth,
    print_formula, run_parser,
)
from .models import IKProverError

logger = logging.getLogger(__name__)


class SequentSyntaxError(FormulaSyntaxError):
    """Raised when text does not conform to the sequent format."""


class AnnotationError(IKProverError):
    """Raised for duplicate annotations or paths that address nothing."""


class BlockKind(Enum):
    """The two kinds of nested blocks."""
    IMPL = "impl"    # < ... >, the pre-order
    MODAL = "modal"  # [ ... ], accessibility


Step = Tuple[BlockKind, int]
Path = Tuple[Step, ...]
ROOT: Path = ()


def _sorted_blocks(blocks: Iterable["Sequent"]) -> Tuple["Sequent", ...]:
    return tuple(sorted(blocks, key=lambda b: b.ann))


@dataclass(frozen=True)
class Succedent:
    """The succedent of a sequent: formulas plus both kinds of blocks."""
    fmls: FrozenSet[Formula] = frozenset()
    iblocks: Tuple["Sequent", ...] = ()
    mblocks: Tuple["Sequent", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "fmls", frozenset(self.fmls))
        object.__setattr__(self, "iblocks", _sorted_blocks(self.iblocks))
        object.__setattr__(self, "mblocks", _sorted_blocks(self.mblocks))

    def is_empty(self) -> bool:
        return not (self.fmls or self.iblocks or self.mblocks)

    def is_block_free(self) -> bool:
        return not (self.iblocks or self.mblocks)

    def key(self) -> tuple:
        """Annotation-free structural key."""
        return (
            self.fmls,
            frozenset(b.shape_key for b in self.iblocks),
            frozenset(b.shape_key for b in self.mblocks),
        )


@dataclass(frozen=True)
class Sequent:
    """An annotated set-based bi-nested sequent."""
    ann: int
    ante: FrozenSet[Formula] = frozenset()
    succ_fmls: FrozenSet[Formula] = frozenset()
    succ_iblocks: Tuple["Sequent", ...] = ()
    succ_mblocks: Tuple["Sequent", ...] = ()

    def __post_init__(self) -> None:
        if self.ann < 0:
            raise AnnotationError(f"annotations are naturals, got {self.ann}")
        object.__setattr__(self, "ante", frozenset(self.ante))
        object.__setattr__(self, "succ_fmls", frozenset(self.succ_fmls))
        object.__setattr__(self, "succ_iblocks", _sorted_blocks(self.succ_iblocks))
        object.__setattr__(self, "succ_mblocks", _sorted_blocks(self.succ_mblocks))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return print_sequent(self)

    @cached_property
    def _hash(self) -> int:
        return hash((self.ann, self.ante, self.succ_fmls, self.succ_iblocks, self.succ_mblocks))

    @property
    def succ(self) -> Succedent:
        return Succedent(self.succ_fmls, self.succ_iblocks, self.succ_mblocks)

    @cached_property
    def shape_key(self) -> tuple:
        """Structure with annotations erased."""
        return (
            self.ante,
            self.succ_fmls,
            frozenset(b.shape_key for b in self.succ_iblocks),
            frozenset(b.shape_key for b in self.succ_mblocks),
        )

    @cached_property
    def sharp_key(self) -> tuple:
        """Antecedent plus the sharp part of the succedent, annotation-free."""
        return (
            self.ante,
            self.succ_fmls,
            frozenset(b.sharp_key for b in self.succ_mblocks),
        )

    @cached_property
    def inclusion_key(self) -> tuple:
        """The data structural inclusion looks at: antecedents of the modal tree."""
        return (self.ante, frozenset(b.inclusion_key for b in self.succ_mblocks))

    @cached_property
    def annotations(self) -> FrozenSet[int]:
        found = {self.ann}
        for block in self.succ_iblocks + self.succ_mblocks:
            found |= block.annotations
        return frozenset(found)

    def is_empty(self) -> bool:
        return not self.ante and self.succ.is_empty()

    def block(self, kind: BlockKind, ann: int) -> "Sequent":
        blocks = self.succ_iblocks if kind is BlockKind.IMPL else self.succ_mblocks
        for b in blocks:
            if b.ann == ann:
                return b
        raise AnnotationError(f"no {kind.value} block {ann} in component {self.ann}")

    def with_ante(self, extra: Iterable[Formula]) -> "Sequent":
        return replace(self, ante=self.ante | frozenset(extra))

    def with_succ_fmls(self, extra: Iterable[Formula]) -> "Sequent":
        return replace(self, succ_fmls=self.succ_fmls | frozenset(extra))

    def with_iblock(self, block: "Sequent") -> "Sequent":
        return replace(self, succ_iblocks=self.succ_iblocks + (block,))

    def with_mblock(self, block: "Sequent") -> "Sequent":
        return replace(self, succ_mblocks=self.succ_mblocks + (block,))


@dataclass(frozen=True)
class EnrichedSequent:
    """A reliance relation paired with an annotated sequent.

    A pair ``(j, j2)`` in ``rel`` records that component ``j2`` is a fresh
    copy of component ``j`` made by inter_bc, so ``j2`` relies on ``j``.
    """
    root: Sequent
    rel: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rel", frozenset(self.rel))

    def __str__(self) -> str:
        pairs = ", ".join(f"({a},{b})" for a, b in sorted(self.rel))
        return f"{pairs}; {print_sequent(self.root)}" if pairs else print_sequent(self.root)

    @cached_property
    def used_annotations(self) -> FrozenSet[int]:
        """Annotations of the sequent and every annotation mentioned in rel."""
        used = set(self.root.annotations)
        for a, b in self.rel:
            used.add(a)
            used.add(b)
        return frozenset(used)

    def next_free_annotation(self) -> int:
        return max(self.used_annotations, default=-1) + 1


# -- paths and components ---------------------------------------------------

def format_path(path: Path) -> str:
    """Render a path as e.g. ``<1>[3]``; the root is ``.``."""
    if not path:
        return "."
    return "".join(f"<{a}>" if kind is BlockKind.IMPL else f"[{a}]" for kind, a in path)


def components(s: Sequent) -> List[Tuple[Path, Sequent]]:
    """
    All components of ``s`` (``s`` included) in pre-order.

    Implication blocks are visited before modal blocks, each group by
    ascending annotation.
    """
    result: List[Tuple[Path, Sequent]] = []
    stack: List[Tuple[Path, Sequent]] = [(ROOT, s)]
    while stack:
        path, node = stack.pop()
        result.append((path, node))
        children = [((BlockKind.IMPL, b.ann), b) for b in node.succ_iblocks]
        children += [((BlockKind.MODAL, b.ann), b) for b in node.succ_mblocks]
        for step, child in reversed(children):
            stack.append((path + (step,), child))
    return result


def component_at(s: Sequent, path: Path) -> Sequent:
    """The component addressed by ``path``."""
    node = s
    for kind, ann in path:
        node = node.block(kind, ann)
    return node


def replace_component(s: Sequent, path: Path, new: Sequent) -> Sequent:
    """Copy of ``s`` in which the component at ``path`` is ``new``."""
    if not path:
        return new
    (kind, ann), rest = path[0], path[1:]
    child = s.block(kind, ann)
    updated = replace_component(child, rest, new)
    if kind is BlockKind.IMPL:
        blocks = tuple(updated if b.ann == ann else b for b in s.succ_iblocks)
        return replace(s, succ_iblocks=blocks)
    blocks = tuple(updated if b.ann == ann else b for b in s.succ_mblocks)
    return replace(s, succ_mblocks=blocks)


def ancestors(path: Path) -> List[Path]:
    """
    Proper prefixes ``p`` of ``path`` such that the component at ``path`` sits
    inside the component at ``p`` through implication blocks only.

    Nearest first.
    """
    result: List[Path] = []
    cut = len(path)
    while cut > 0 and path[cut - 1][0] is BlockKind.IMPL:
        cut -= 1
        result.append(path[:cut])
    return result


def modal_closure(s: Sequent, path: Path = ROOT) -> List[Tuple[Path, Sequent]]:
    """The component at ``path`` and its descendants through modal blocks only."""
    start = component_at(s, path)
    result: List[Tuple[Path, Sequent]] = []
    stack = [(path, start)]
    while stack:
        p, node = stack.pop()
        result.append((p, node))
        for b in reversed(node.succ_mblocks):
            stack.append((p + ((BlockKind.MODAL, b.ann),), b))
    return result


def check_annotations(s: Sequent) -> None:
    """Raise AnnotationError unless all annotations in ``s`` are distinct."""
    seen: Dict[int, Path] = {}
    for path, node in components(s):
        if node.ann in seen:
            raise AnnotationError(
                f"annotation {node.ann} used at {format_path(seen[node.ann])} and {format_path(path)}"
            )
        seen[node.ann] = path


def is_flat(s: Sequent) -> bool:
    """True when no implication block occurs anywhere in ``s``."""
    return all(not node.succ_iblocks for _, node in components(s))


# -- structural measures ----------------------------------------------------

def positive_part(t: Sequent) -> Sequent:
    """``Λ => Θ*`` for ``t = Λ => Θ``, annotations kept."""
    return Sequent(t.ann, t.ante, frozenset(), (), tuple(positive_part(b) for b in t.succ_mblocks))


def local_positive(succ: Succedent) -> Succedent:
    """Δ*: the modal blocks of Δ with their succedents made positive; empty if none."""
    if not succ.mblocks:
        return Succedent()
    return Succedent(frozenset(), (), tuple(positive_part(b) for b in succ.mblocks))


def _sharp_block(t: Sequent) -> Sequent:
    return Sequent(t.ann, t.ante, t.succ_fmls, (), tuple(_sharp_block(b) for b in t.succ_mblocks))


def sharp(succ: Succedent) -> Succedent:
    """Δ♯: drop implication blocks at every level, keeping formulas and modal blocks."""
    if succ.is_block_free():
        return succ
    return Succedent(succ.fmls, (), tuple(_sharp_block(b) for b in succ.mblocks))


def sharp_equivalent(s1: Sequent, s2: Sequent) -> bool:
    """Equal antecedents and equal sharp succedents, ignoring annotations."""
    return s1.sharp_key == s2.sharp_key


@lru_cache(maxsize=1 << 16)
def _included(k1: tuple, k2: tuple) -> bool:
    ante1, children1 = k1
    ante2, children2 = k2
    if not ante1 <= ante2:
        return False
    return all(any(_included(c1, c2) for c2 in children2) for c1 in children1)


def included(t1: Sequent, t2: Sequent) -> bool:
    """Structural inclusion ``t1 ⊆^S t2`` between two sequents."""
    if t1 is t2:
        return True
    return _included(t1.inclusion_key, t2.inclusion_key)


def structurally_included(p1: Path, p2: Path, s: Sequent) -> bool:
    """Structural inclusion between two components of ``s`` addressed by path."""
    return included(component_at(s, p1), component_at(s, p2))


class AnnotationSupply:
    """Monotone source of fresh annotations."""

    def __init__(self, start: int = 0):
        self._next = start

    @property
    def peek(self) -> int:
        return self._next

    def take(self) -> int:
        value = self._next
        self._next += 1
        return value

    def advance_past(self, used: Iterable[int]) -> None:
        for a in used:
            if a >= self._next:
                self._next = a + 1


def _copy(t: Sequent, supply: AnnotationSupply, pairs: List[Tuple[int, int]]) -> Sequent:
    new_ann = supply.take()
    pairs.append((t.ann, new_ann))
    iblocks = tuple(_copy(b, supply, pairs) for b in t.succ_iblocks)
    mblocks = tuple(_copy(b, supply, pairs) for b in t.succ_mblocks)
    return Sequent(new_ann, t.ante, t.succ_fmls, iblocks, mblocks)


def copy_from(t: Sequent, supply: AnnotationSupply) -> Tuple[Sequent, Tuple[Tuple[int, int], ...]]:
    """Fresh copy of ``t`` drawing annotations from ``supply`` in pre-order."""
    pairs: List[Tuple[int, int]] = []
    copy = _copy(t, supply, pairs)
    return copy, tuple(pairs)


def fresh_copy(t: Sequent, used: Iterable[int]) -> Tuple[Sequent, Tuple[Tuple[int, int], ...]]:
    """
    Fresh annotated copy of ``t``.

    Args:
        t: The sequent to copy
        used: Annotations the copy must avoid

    Returns:
        The copy and the (original, copy) annotation pairs, component-wise
    """
    used = set(used) | set(t.annotations)
    return copy_from(t, AnnotationSupply(max(used, default=-1) + 1))


def renumber(s: Sequent, start: int = 0) -> Sequent:
    """Reassign annotations ``start, start+1, ...`` in pre-order."""
    return copy_from(s, AnnotationSupply(start))[0]


@lru_cache(maxsize=1 << 14)
def sequent_modal_depth(s: Sequent) -> int:
    """Modal depth of a sequent: modal blocks add one, implication blocks add zero."""
    depth = max((modal_depth(f) for f in s.ante | s.succ_fmls), default=0)
    for b in s.succ_iblocks:
        depth = max(depth, sequent_modal_depth(b))
    for b in s.succ_mblocks:
        depth = max(depth, sequent_modal_depth(b) + 1)
    return depth


# -- text format ------------------------------------------------------------

def _formula_list(fmls: Iterable[Formula]) -> List[str]:
    return [print_formula(f) for f in sorted(fmls, key=formula_key)]


def print_sequent(s: Sequent, annotated: bool = True) -> str:
    """
    Print a sequent, e.g. ``p =>{0} q, < r =>{1} >, [ =>{2} s ]``.

    Formulas come first, then implication blocks, then modal blocks.
    """
    arrow = f"=>{{{s.ann}}}" if annotated else "=>"
    items = _formula_list(s.succ_fmls)
    items += [f"< {print_sequent(b, annotated)} >" for b in s.succ_iblocks]
    items += [f"[ {print_sequent(b, annotated)} ]" for b in s.succ_mblocks]
    parts = [", ".join(_formula_list(s.ante)), arrow, ", ".join(items)]
    return " ".join(p for p in parts if p)


@dataclass
class _Draft:
    ann: Optional[int]
    ante: List[Formula] = field(default_factory=list)
    fmls: List[Formula] = field(default_factory=list)
    iblocks: List["_Draft"] = field(default_factory=list)
    mblocks: List["_Draft"] = field(default_factory=list)

    def walk(self) -> Iterator["_Draft"]:
        yield self
        for b in self.iblocks + self.mblocks:
            yield from b.walk()


@dataclass
class _BlockItem:
    kind: BlockKind
    draft: _Draft


class SequentTransformer(FormulaTransformer):
    """Builds sequent drafts; annotations are settled afterwards."""

    def annotation(self, items):
        return int(items[0])

    def antecedent(self, items):
        return list(items)

    def succedent(self, items):
        return list(items)

    def iblock(self, items):
        return _BlockItem(BlockKind.IMPL, items[0])

    def mblock(self, items):
        return _BlockItem(BlockKind.MODAL, items[0])

    def sequent(self, items):
        ante, ann, succ = items
        draft = _Draft(ann=ann, ante=list(ante or []))
        for item in succ or []:
            if isinstance(item, _BlockItem):
                (draft.iblocks if item.kind is BlockKind.IMPL else draft.mblocks).append(item.draft)
            else:
                draft.fmls.append(item)
        return draft


def _settle(draft: _Draft, text: str) -> Sequent:
    given = [d.ann for d in draft.walk() if d.ann is not None]
    if len(given) != len(set(given)):
        raise SequentSyntaxError(f"Duplicate annotation in {text!r}", text=text)
    supply = AnnotationSupply(max(given, default=-1) + 1)
    for d in draft.walk():
        if d.ann is None:
            d.ann = supply.take()

    def build(d: _Draft) -> Sequent:
        return Sequent(
            d.ann,  # type: ignore[arg-type]
            frozenset(d.ante),
            frozenset(d.fmls),
            tuple(build(b) for b in d.iblocks),
            tuple(build(b) for b in d.mblocks),
        )

    return build(draft)


def parse_sequent(text: str) -> Sequent:
    """
    Parse the textual sequent format ``G , A => D , <S> , [T]``.

    ``=>{n}`` fixes the annotation of a component; components without one
    receive fresh annotations in pre-order.

    Raises:
        SequentSyntaxError: If the text is malformed or repeats an annotation
    """
    draft = run_parser(text, "sequent", SequentTransformer(), error_cls=SequentSyntaxError)
    return _settle(draft, text)


def parse_enriched(text: str, rel: Sequence[Tuple[int, int]] = ()) -> EnrichedSequent:
    """Parse a sequent and pair it with the given reliance pairs."""
    return EnrichedSequent(parse_sequent(text), frozenset(rel))
