"""
Unit tests for the formula module.
"""

import pytest

from ik_prover.core.formula import (
    BOTTOM, TOP, And, Atom, Box, Dia, FormulaSyntaxError, Imp, Or, atoms, is_negation,
    modal_depth, neg, parse, print_formula, size,
)
from ik_prover.core.oracle import random_formula

p, q, r = Atom("p"), Atom("q"), Atom("r")


class TestParse:
    """Test parsing of the concrete syntax."""

    def test_parse_atoms_and_constants(self):
        """Test atoms and the two constants."""
        assert parse("p") == p
        assert parse("false") == BOTTOM
        assert parse("true") == TOP

    def test_implication_is_right_associative(self):
        """Test that a -> b -> c groups to the right."""
        assert parse("p -> q -> r") == Imp(p, Imp(q, r))

    def test_binding_strength(self):
        """Test unary > & > | > ->."""
        assert parse("p | q & r -> p") == Imp(Or(p, And(q, r)), p)
        assert parse("box p & q") == And(Box(p), q)
        assert parse("~p | q") == Or(neg(p), q)

    def test_modal_operators_and_symbol_forms(self):
        """Test box/dia and the [] / <> spellings."""
        assert parse("box (p -> q)") == Box(Imp(p, q))
        assert parse("[] p") == Box(p)
        assert parse("<> p") == Dia(p)
        assert parse("dia dia p") == Dia(Dia(p))

    def test_negation_is_sugar(self):
        """Test that ~A parses to A -> false."""
        assert parse("~p") == Imp(p, BOTTOM)
        assert parse("~~p") == neg(neg(p))

    def test_axiom_k(self):
        """Test the K axiom."""
        assert parse("box (p -> q) -> (box p -> box q)") == Imp(Box(Imp(p, q)), Imp(Box(p), Box(q)))

    def test_keyword_prefixed_atoms(self):
        """Test that identifiers starting with a keyword are atoms."""
        assert parse("boxer") == Atom("boxer")
        assert parse("falsehood -> p") == Imp(Atom("falsehood"), p)

    @pytest.mark.parametrize("text", ["p ->", "p & & q", "(p", "box", "p q", ""])
    def test_syntax_errors(self, text):
        """Test malformed input raises FormulaSyntaxError."""
        with pytest.raises(FormulaSyntaxError):
            parse(text)

    def test_syntax_error_is_value_error(self):
        """Test that callers can catch ValueError."""
        with pytest.raises(ValueError):
            parse("p -> ")

    def test_syntax_error_carries_text(self):
        """Test error attributes."""
        with pytest.raises(FormulaSyntaxError) as exc_info:
            parse("p & ) q")
        assert exc_info.value.text == "p & ) q"


class TestPrint:
    """Test the printer."""

    @pytest.mark.parametrize("text", [
        "p",
        "p&q",
        "p | q",
        "p -> q -> r",
        "(p -> q) -> r",
        "~p",
        "~~p",
        "~(p -> q)",
        "box (p -> q) -> box p -> box q",
        "dia (p | q) -> dia p | dia q",
        "p&(q | r)",
        "p | (q | r)",
        "(p | q)&r",
        "~dia false",
        "true -> p",
    ])
    def test_canonical_text_is_stable(self, text):
        """Test that canonical text prints back unchanged."""
        assert print_formula(parse(text)) == text

    def test_negation_prints_with_tilde(self):
        """Test A -> false prints as ~A."""
        assert print_formula(Imp(Box(p), BOTTOM)) == "~box p"

    def test_str_uses_printer(self):
        """Test Formula.__str__."""
        assert str(Dia(And(p, q))) == "dia (p&q)"

    def test_random_formulas_reparse(self, rng):
        """Test parse(print(f)) == f on generated formulas."""
        for _ in range(200):
            f = random_formula(rng, max_depth=3, max_connectives=10)
            assert parse(print_formula(f)) == f


class TestMeasures:
    """Test formula-level measures."""

    def test_atoms(self):
        """Test atom collection."""
        assert atoms(parse("box (p -> q) -> dia p | true")) == frozenset({"p", "q"})
        assert atoms(BOTTOM) == frozenset()

    def test_size_counts_connectives(self):
        """Test that size counts connectives and ignores constants."""
        assert size(p) == 0
        assert size(parse("p & q")) == 1
        assert size(parse("~p")) == 1
        assert size(parse("box (p -> q) -> (box p -> box q)")) == 6

    def test_modal_depth(self):
        """Test modal nesting."""
        assert modal_depth(p) == 0
        assert modal_depth(parse("box p -> dia box q")) == 2
        assert modal_depth(parse("box (p & dia (q | box r))")) == 3

    def test_is_negation(self):
        """Test the negation shape test."""
        assert is_negation(neg(p))
        assert not is_negation(Imp(p, q))

    def test_invalid_atom_names(self):
        """Test that keywords and malformed names are not atoms."""
        with pytest.raises(ValueError):
            Atom("box")
        with pytest.raises(ValueError):
            Atom("1p")

    def test_formulas_are_hashable_values(self):
        """Test structural equality and hashing."""
        assert {parse("p & q"), And(p, q)} == {And(p, q)}
