"""
Brute-force semantic oracle and the curated formula corpus.

The oracle enumerates every frame-valid model up to a small number of
worlds and looks for one whose root falsifies a formula. It only ever
refutes: finding nothing says nothing about validity beyond the bound.
"""

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .formula import BOTTOM, TOP, And, Atom, Bottom, Box, Dia, Formula, Imp, Or, Top, atoms, neg, parse
from .model import Model
from .models import Verdict

logger = logging.getLogger(__name__)

MAX_WORLDS = 4
DEFAULT_ATOMS = ("p", "q", "r")

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ModelShape:
    """A frame-valid pre-order and accessibility relation on worlds 0..n-1."""
    n_worlds: int
    leq: FrozenSet[Pair]
    acc: FrozenSet[Pair]

    @property
    def up(self) -> Tuple[FrozenSet[int], ...]:
        return _successor_table(self.n_worlds, self.leq)

    @property
    def succ(self) -> Tuple[FrozenSet[int], ...]:
        return _successor_table(self.n_worlds, self.acc)


@lru_cache(maxsize=None)
def _successor_table(n: int, pairs: FrozenSet[Pair]) -> Tuple[FrozenSet[int], ...]:
    return tuple(frozenset(b for a, b in pairs if a == w) for w in range(n))


def _is_transitive(pairs: FrozenSet[Pair]) -> bool:
    return all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)


def _canonical(n: int, pairs: FrozenSet[Pair]) -> Tuple[Pair, ...]:
    return min(tuple(sorted((perm[a], perm[b]) for a, b in pairs)) for perm in permutations(range(n)))


@lru_cache(maxsize=None)
def enumerate_preorders(n: int) -> Tuple[FrozenSet[Pair], ...]:
    """Pre-orders on ``range(n)``, one per isomorphism class, in canonical order."""
    if n < 1:
        return ()
    reflexive = frozenset((w, w) for w in range(n))
    offdiagonal = [(a, b) for a in range(n) for b in range(n) if a != b]
    classes = set()
    for mask in range(1 << len(offdiagonal)):
        pairs = reflexive | frozenset(p for i, p in enumerate(offdiagonal) if mask >> i & 1)
        if _is_transitive(pairs):
            classes.add(_canonical(n, pairs))
    return tuple(frozenset(c) for c in sorted(classes))


def _confluent(up: Sequence[FrozenSet[int]], succ: Sequence[FrozenSet[int]]) -> bool:
    n = len(up)
    for x in range(n):
        for x2 in up[x]:
            for z in succ[x]:
                if not any(z2 in up[z] for z2 in succ[x2]):
                    return False
        for z in succ[x]:
            for z2 in up[z]:
                if not any(z2 in succ[x2] for x2 in up[x]):
                    return False
    return True


@lru_cache(maxsize=None)
def enumerate_frames(n: int) -> Tuple[ModelShape, ...]:
    """Frame-valid shapes on ``n`` worlds: canonical pre-order first, then R mask."""
    shapes: List[ModelShape] = []
    cells = [(a, b) for a in range(n) for b in range(n)]
    for leq in enumerate_preorders(n):
        up = _successor_table(n, leq)
        for mask in range(1 << len(cells)):
            acc = frozenset(c for i, c in enumerate(cells) if mask >> i & 1)
            if _confluent(up, _successor_table(n, acc)):
                shapes.append(ModelShape(n, leq, acc))
    logger.debug(f"{len(shapes)} frame-valid shapes on {n} worlds")
    return tuple(shapes)


def _upsets(up: Sequence[FrozenSet[int]]) -> List[FrozenSet[int]]:
    n = len(up)
    found = []
    for mask in range(1 << n):
        members = frozenset(w for w in range(n) if mask >> w & 1)
        if all(up[w] <= members for w in members):
            found.append(members)
    return found


class _BitEvaluator:
    """Truth of a formula at each world for all valuations at once, one bit per valuation."""

    def __init__(self, shape: ModelShape, names: Sequence[str]):
        self.shape = shape
        self.up = shape.up
        self.succ = shape.succ
        self.upsets = _upsets(self.up)
        self.names = list(names)
        radix = len(self.upsets)
        self.count = radix ** len(self.names)
        self.full = (1 << self.count) - 1
        self.atom_masks: Dict[str, List[int]] = {}
        for i, name in enumerate(self.names):
            masks = [0] * shape.n_worlds
            step = radix ** i
            for v in range(self.count):
                upset = self.upsets[(v // step) % radix]
                for w in upset:
                    masks[w] |= 1 << v
            self.atom_masks[name] = masks
        self._memo: Dict[Formula, List[int]] = {}

    def valuation(self, index: int) -> Dict[int, FrozenSet[str]]:
        radix = len(self.upsets)
        val: Dict[int, set] = {w: set() for w in range(self.shape.n_worlds)}
        for i, name in enumerate(self.names):
            for w in self.upsets[(index // radix ** i) % radix]:
                val[w].add(name)
        return {w: frozenset(names) for w, names in val.items()}

    def masks(self, f: Formula) -> List[int]:
        cached = self._memo.get(f)
        if cached is None:
            cached = self._compute(f)
            self._memo[f] = cached
        return cached

    def _compute(self, f: Formula) -> List[int]:
        n = self.shape.n_worlds
        if isinstance(f, Atom):
            return self.atom_masks[f.name]
        if isinstance(f, Bottom):
            return [0] * n
        if isinstance(f, Top):
            return [self.full] * n
        if isinstance(f, (And, Or)):
            left, right = self.masks(f.left), self.masks(f.right)
            if isinstance(f, And):
                return [left[w] & right[w] for w in range(n)]
            return [left[w] | right[w] for w in range(n)]
        if isinstance(f, Imp):
            left, right = self.masks(f.left), self.masks(f.right)
            local = [(~left[w] | right[w]) & self.full for w in range(n)]
            return [_meet((local[v] for v in self.up[w]), self.full) for w in range(n)]
        if isinstance(f, Box):
            body = self.masks(f.body)
            return [_meet((body[z] for v in self.up[w] for z in self.succ[v]), self.full)
                    for w in range(n)]
        if isinstance(f, Dia):
            body = self.masks(f.body)
            result = []
            for w in range(n):
                acc = 0
                for z in self.succ[w]:
                    acc |= body[z]
                result.append(acc)
            return result
        raise TypeError(f"not a formula: {f!r}")


def _meet(values: Iterator[int], full: int) -> int:
    result = full
    for value in values:
        result &= value
    return result


def bounded_countermodel_search(a: Formula, max_worlds: int = 3) -> Optional[Model]:
    """
    First model, in enumeration order, whose root does not force ``a``.

    Models are enumerated by number of worlds, then canonical pre-order,
    then accessibility relation, then root, then valuation.

    Args:
        a: The formula to refute
        max_worlds: Largest model size tried, at most 4

    Returns:
        A frame-valid countermodel, or None if there is none within the bound
    """
    if not 1 <= max_worlds <= MAX_WORLDS:
        raise ValueError(f"max_worlds must be between 1 and {MAX_WORLDS}, got {max_worlds}")
    names = sorted(atoms(a))
    for n in range(1, max_worlds + 1):
        for shape in enumerate_frames(n):
            evaluator = _BitEvaluator(shape, names)
            truth = evaluator.masks(a)
            for root in range(n):
                failing = evaluator.full & ~truth[root]
                if failing:
                    index = (failing & -failing).bit_length() - 1
                    model = Model(frozenset(range(n)), shape.leq, shape.acc,
                                  evaluator.valuation(index), root)
                    logger.debug(f"Oracle refutes {a} on {n} worlds")
                    return model
    return None


def oracle_agrees(formula: Formula, verdict: Verdict, max_worlds: int = 3) -> bool:
    """
    The prover's verdict is consistent with the oracle.

    A Provable verdict needs the oracle to find nothing; an Unprovable
    verdict is always consistent because the oracle is incomplete. A
    budget-exceeded verdict never agrees.
    """
    if verdict is Verdict.BUDGET_EXCEEDED:
        return False
    if verdict is Verdict.PROVABLE:
        return bounded_countermodel_search(formula, max_worlds) is None
    return True


def random_formula(rng: random.Random, max_depth: int = 2, max_connectives: int = 8,
                   atom_names: Sequence[str] = DEFAULT_ATOMS) -> Formula:
    """Seeded random formula with bounded modal depth and connective count."""
    return _grow(rng, rng.randint(0, max_connectives), max_depth, atom_names)


def _grow(rng: random.Random, budget: int, depth: int, atom_names: Sequence[str]) -> Formula:
    if budget == 0:
        roll = rng.random()
        if roll < 0.06:
            return BOTTOM
        if roll < 0.09:
            return TOP
        return Atom(rng.choice(list(atom_names)))
    operators = ["and", "or", "imp", "imp", "neg"]
    if depth > 0:
        operators += ["box", "dia"]
    op = rng.choice(operators)
    if op in ("box", "dia"):
        body = _grow(rng, budget - 1, depth - 1, atom_names)
        return Box(body) if op == "box" else Dia(body)
    if op == "neg":
        return neg(_grow(rng, budget - 1, depth, atom_names))
    left_budget = rng.randint(0, budget - 1)
    left = _grow(rng, left_budget, depth, atom_names)
    right = _grow(rng, budget - 1 - left_budget, depth, atom_names)
    return {"and": And, "or": Or, "imp": Imp}[op](left, right)


class CorpusEntry(NamedTuple):
    name: str
    formula: Formula
    expected: Verdict


_CORPUS = (
    ("ax1", "box (p -> q) -> (box p -> box q)", Verdict.PROVABLE),
    ("ax2", "box (p -> q) -> (dia p -> dia q)", Verdict.PROVABLE),
    ("ax3", "dia (p | q) -> (dia p | dia q)", Verdict.PROVABLE),
    ("ax4", "(dia p -> box q) -> box (p -> q)", Verdict.PROVABLE),
    ("ax4_curried", "dia p -> box q -> box (p -> q)", Verdict.PROVABLE),
    ("ax5", "~dia false", Verdict.PROVABLE),
    ("excluded_middle", "p | ~p", Verdict.UNPROVABLE),
    ("reflexivity", "box p -> p", Verdict.UNPROVABLE),
    ("dia_to_box", "dia p -> box p", Verdict.UNPROVABLE),
    ("box_dual", "~box ~p -> dia p", Verdict.UNPROVABLE),
    ("dia_dual", "~dia ~p -> box p", Verdict.UNPROVABLE),
)


def axiom_corpus() -> List[CorpusEntry]:
    """IK axioms at atoms (provable) followed by curated non-theorems."""
    return [CorpusEntry(name, parse(text), expected) for name, text, expected in _CORPUS]
