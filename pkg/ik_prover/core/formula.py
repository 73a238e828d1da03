"""
Formula AST, concrete syntax and formula-level measures.

Formulas are immutable values. Negation is not a constructor: ``~A`` is
sugar for ``A -> false`` and the printer renders that shape back as ``~A``.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Optional

from lark import Transformer
from lark.exceptions import LarkError, UnexpectedInput, VisitError

from .grammar import get_parser
from .models import IKProverError

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({"box", "dia", "true", "false"})
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class FormulaSyntaxError(IKProverError, ValueError):
    """Raised when text does not conform to the formula grammar."""

    def __init__(self, message: str, text: str = "", line: Optional[int] = None,
                 column: Optional[int] = None):
        self.text = text
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None and column is not None else ""
        super().__init__(f"{message}{where}")


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self) -> None:
        if not _IDENTIFIER.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Dia(Formula):
    body: Formula


BOTTOM = Bottom()
TOP = Top()

# binding strength used by the printer
_PREC_IMP = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNARY = 4


def neg(f: Formula) -> Formula:
    """The formula ``f -> false``."""
    return Imp(f, BOTTOM)


def is_negation(f: Formula) -> bool:
    return isinstance(f, Imp) and isinstance(f.right, Bottom)


class FormulaTransformer(Transformer):
    """Builds formula values from parse trees."""

    def imp(self, items):
        return Imp(items[0], items[1])

    def or_(self, items):
        return Or(items[0], items[1])

    def and_(self, items):
        return And(items[0], items[1])

    def box(self, items):
        return Box(items[-1])

    def dia(self, items):
        return Dia(items[-1])

    def neg(self, items):
        return neg(items[-1])

    def top(self, _items):
        return TOP

    def bottom(self, _items):
        return BOTTOM

    def atom(self, items):
        return Atom(str(items[0]))


def run_parser(text: str, start: str, transformer: Transformer, error_cls=FormulaSyntaxError):
    """Parse ``text`` from ``start`` and transform, mapping lark errors."""
    try:
        tree = get_parser().parse(text, start=start)
    except UnexpectedInput as exc:
        line = getattr(exc, "line", None)
        column = getattr(exc, "column", None)
        if line is not None and line < 0:
            line = column = None
        raise error_cls(f"Unexpected input in {start} {text!r}", text=text,
                        line=line, column=column) from exc
    except LarkError as exc:
        raise error_cls(f"Cannot parse {start} {text!r}: {exc}", text=text) from exc
    try:
        return transformer.transform(tree)
    except VisitError as exc:
        original = exc.orig_exc
        if isinstance(original, IKProverError):
            raise original from exc
        raise error_cls(f"Invalid {start} {text!r}: {original}", text=text) from exc


def parse(text: str) -> Formula:
    """
    Parse a formula.

    Args:
        text: Formula in the concrete syntax, e.g. ``dia p -> box q``

    Returns:
        The formula AST; ``~A`` becomes ``A -> false``

    Raises:
        FormulaSyntaxError: If the text is malformed
    """
    result = run_parser(text, "formula", FormulaTransformer())
    if not isinstance(result, Formula):
        raise FormulaSyntaxError(f"Not a formula: {text!r}", text=text)
    return result


def _precedence(f: Formula) -> int:
    if isinstance(f, Imp):
        return _PREC_UNARY if is_negation(f) else _PREC_IMP
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    return _PREC_UNARY


def _wrap(f: Formula, minimum: int) -> str:
    text = print_formula(f)
    return f"({text})" if _precedence(f) < minimum else text


@lru_cache(maxsize=65536)
def print_formula(f: Formula) -> str:
    """
    Print a formula so that ``parse(print_formula(f)) == f``.

    Conjunction is printed tight (``A&B``), disjunction and implication with
    spaces, and ``A -> false`` as ``~A``.
    """
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Imp):
        if is_negation(f):
            return f"~{_wrap(f.left, _PREC_UNARY)}"
        return f"{_wrap(f.left, _PREC_OR)} -> {_wrap(f.right, _PREC_IMP)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _PREC_OR)} | {_wrap(f.right, _PREC_AND)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, _PREC_AND)}&{_wrap(f.right, _PREC_UNARY)}"
    if isinstance(f, Box):
        return f"box {_wrap(f.body, _PREC_UNARY)}"
    if isinstance(f, Dia):
        return f"dia {_wrap(f.body, _PREC_UNARY)}"
    raise TypeError(f"not a formula: {f!r}")


def formula_key(f: Formula) -> str:
    """Canonical sort key for formulas."""
    return print_formula(f)


@lru_cache(maxsize=65536)
def modal_depth(f: Formula) -> int:
    """Maximal nesting of modalities in ``f``."""
    if isinstance(f, (Box, Dia)):
        return modal_depth(f.body) + 1
    if isinstance(f, (And, Or, Imp)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 0


@lru_cache(maxsize=65536)
def atoms(f: Formula) -> FrozenSet[str]:
    """Names of the atoms occurring in ``f``."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, (Box, Dia)):
        return atoms(f.body)
    if isinstance(f, (And, Or, Imp)):
        return atoms(f.left) | atoms(f.right)
    return frozenset()


def size(f: Formula) -> int:
    """Number of connectives (constants count as zero)."""
    if isinstance(f, (Box, Dia)):
        return 1 + size(f.body)
    if isinstance(f, (And, Or, Imp)):
        return 1 + size(f.left) + size(f.right)
    return 0
