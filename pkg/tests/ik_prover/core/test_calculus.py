"""
Unit tests for rules, saturation, blocking and proof replay.
"""

from dataclasses import replace

import pytest

from ik_prover.core.calculus import (
    Derivation, ProofCheckError, RuleId, SaturationLevel, apply_instance, applicable_instances,
    axiom_instance, blocked_components, blockers, check_proof, derivation_to_dict, derivation_to_text,
    instances_at, is_axiomatic, is_blocked, is_global_saturated, locally_saturated, pending,
    saturated_for, saturation_level, verify_proof,
)
from ik_prover.core.formula import And, Atom, Imp, parse
from ik_prover.core.models import LeafStatus
from ik_prover.core.sequent import BlockKind, EnrichedSequent, parse_sequent, print_sequent

p, q = Atom("p"), Atom("q")
IMPL, MODAL = BlockKind.IMPL, BlockKind.MODAL


def enriched(text, rel=()):
    return EnrichedSequent(parse_sequent(text), frozenset(rel))


def only_instance(e, group, focus=()):
    found = instances_at(e, focus, group)
    assert len(found) == 1
    return found[0]


def identity_proof():
    """Two-node proof of p -> p."""
    e = enriched("=>{0} p -> p")
    instance = only_instance(e, SaturationLevel.R3)
    premise = instance.premises[0]
    leaf = Derivation(premise, axiom_instance(premise.root), LeafStatus.AXIOMATIC)
    return Derivation(e, instance, LeafStatus.INTERNAL, [leaf])


class TestAxioms:
    """Test axiom detection."""

    @pytest.mark.parametrize("text, rule", [
        ("p =>{0} p", RuleId.Id),
        ("false =>{0}", RuleId.BotL),
        ("=>{0} true", RuleId.TopR),
    ])
    def test_axiom_rules(self, text, rule):
        """Test each axiom at the root."""
        instance = axiom_instance(parse_sequent(text))
        assert instance.rule is rule
        assert instance.focus == ()

    def test_axiom_in_nested_component(self):
        """Test that an axiom anywhere closes the sequent."""
        instance = axiom_instance(parse_sequent("=>{0} q, [ p =>{1} p ]"))
        assert instance.rule is RuleId.Id
        assert instance.focus == ((MODAL, 1),)

    def test_identity_needs_an_atom(self):
        """Test that Id is restricted to atoms."""
        assert not is_axiomatic(parse_sequent("p & q =>{0} p & q"))
        assert not is_axiomatic(parse_sequent("p =>{0} q"))


class TestRules:
    """Test premises of each rule."""

    def test_and_left(self):
        """Test AndL adds both conjuncts."""
        e = enriched("p & q =>{0}")
        assert pending(e.root, SaturationLevel.R1) == ((RuleId.AndL, (And(p, q),)),)
        instance = only_instance(e, SaturationLevel.R1)
        assert len(instance.premises) == 1
        assert instance.premises[0].root.ante == frozenset({And(p, q), p, q})
        assert locally_saturated(instance.premises[0].root, SaturationLevel.R1)

    def test_and_right_branches(self):
        """Test AndR yields two premises."""
        instance = only_instance(enriched("=>{0} p & q"), SaturationLevel.R1)
        assert [print_sequent(prem.root) for prem in instance.premises] == [
            "=>{0} p, p&q", "=>{0} p&q, q",
        ]

    def test_imp_right_new_block(self):
        """Test ImpR_new opens an implication block with a fresh annotation."""
        instance = only_instance(enriched("=>{0} p -> q"), SaturationLevel.R3)
        assert instance.rule is RuleId.ImpR_new
        assert instance.created == (1,)
        assert print_sequent(instance.premises[0].root) == "=>{0} p -> q, < p =>{1} q >"

    def test_imp_right_in_place(self):
        """Test ImpR_in when the antecedent is already on the left."""
        instance = only_instance(enriched("p =>{0} p -> q"), SaturationLevel.R3)
        assert instance.rule is RuleId.ImpR_in
        assert instance.created == ()
        assert print_sequent(instance.premises[0].root) == "p =>{0} p -> q, q"

    def test_box_right(self):
        """Test BoxR opens an implication block holding a modal block."""
        instance = only_instance(enriched("=>{0} box p"), SaturationLevel.R3)
        assert instance.created == (1, 2)
        assert print_sequent(instance.premises[0].root) == "=>{0} box p, < =>{1} [ =>{2} p ] >"

    def test_box_left(self):
        """Test BoxL pushes the body into each modal block."""
        e = enriched("box p =>{0} [ =>{1} ]")
        assert pending(e.root, SaturationLevel.R1) == ((RuleId.BoxL, (parse("box p"), 1)),)
        instance = only_instance(e, SaturationLevel.R1)
        assert print_sequent(instance.premises[0].root) == "box p =>{0} [ p =>{1} ]"

    def test_dia_left(self):
        """Test DiaL opens a modal block."""
        instance = only_instance(enriched("dia p =>{0}"), SaturationLevel.R1)
        assert print_sequent(instance.premises[0].root) == "dia p =>{0} [ p =>{1} ]"

    def test_trans(self):
        """Test Trans copies the antecedent into an implication block."""
        instance = only_instance(enriched("p =>{0} < =>{1} >"), SaturationLevel.R2)
        assert instance.rule is RuleId.Trans
        assert print_sequent(instance.premises[0].root) == "p =>{0} < p =>{1} >"

    def test_inter_fc(self):
        """Test InterFC copies the positive part of a modal block."""
        instance = only_instance(enriched("=>{0} < =>{1} >, [ q =>{2} p ]"), SaturationLevel.R2)
        assert instance.rule is RuleId.InterFC
        assert instance.created == (3,)
        assert print_sequent(instance.premises[0].root) == (
            "=>{0} < =>{1} [ q =>{3} ] >, [ q =>{2} p ]"
        )

    def test_inter_bc_records_reliance(self):
        """Test InterBC copies an inner implication block and adds reliance pairs."""
        instance = only_instance(enriched("=>{0} [ =>{1} < p =>{2} > ]"), SaturationLevel.R4)
        assert instance.rule is RuleId.InterBC
        assert instance.created == (3, 4)
        assert instance.reliance_added == ((2, 4),)
        premise = instance.premises[0]
        assert print_sequent(premise.root) == "=>{0} < =>{3} [ p =>{4} ] >, [ =>{1} < p =>{2} > ]"
        assert premise.rel == frozenset({(2, 4)})

    def test_saturated_for(self):
        """Test a single rule's condition at a focus."""
        s = parse_sequent("p & q, p, q =>{0} p -> q")
        assert saturated_for(RuleId.AndL, (), s)
        assert not saturated_for(RuleId.ImpR_in, (), s)

    def test_applicable_instances_visit_every_component(self):
        """Test pre-order of foci."""
        e = enriched("dia p =>{0} [ dia q =>{1} ]")
        foci = [instance.focus for instance in applicable_instances(e, SaturationLevel.R1)]
        assert foci == [(), ((MODAL, 1),)]


class TestSaturation:
    """Test saturation levels and blocking."""

    def test_levels(self):
        """Test cumulative levels at the root."""
        assert saturation_level((), parse_sequent("p =>{0} q")) is SaturationLevel.R4
        assert saturation_level((), parse_sequent("=>{0} p -> q")) is SaturationLevel.R2
        assert saturation_level((), parse_sequent("p =>{0} < =>{1} >")) is SaturationLevel.R1
        assert saturation_level((), parse_sequent("p & q =>{0}")) is SaturationLevel.NONE

    def test_r1_covers_modal_descendants(self):
        """Test that an unsaturated modal child lowers the parent's level."""
        assert saturation_level((), parse_sequent("=>{0} [ p & q =>{1} ]")) is SaturationLevel.NONE

    def test_blocking_by_sharp_equivalent_ancestor(self):
        """Test a copy of a saturated ancestor is blocked."""
        s = parse_sequent("p =>{0} < p =>{1} >")
        assert is_blocked(((IMPL, 1),), s) == ()
        assert blocked_components(s) == {((IMPL, 1),): ()}

    def test_no_blocking_through_modal_steps(self):
        """Test that modal children are never blocked."""
        s = parse_sequent("p =>{0} [ p =>{1} ]")
        assert is_blocked(((MODAL, 1),), s) is None

    def test_every_blocker_is_listed(self):
        """Test that all sharp-equivalent saturated ancestors block, nearest first."""
        s = parse_sequent("p =>{0} < p =>{1} < p =>{2} > >")
        focus = ((IMPL, 1), (IMPL, 2))
        assert blockers(focus, s) == [((IMPL, 1),), ()]
        assert is_blocked(focus, s) == ((IMPL, 1),)
        assert blockers(((IMPL, 1),), s) == [()]

    def test_global_saturation(self):
        """Test global saturation on a leaf with nothing left to do."""
        assert is_global_saturated(enriched("p =>{0} q"))
        assert not is_global_saturated(enriched("p =>{0} p"))
        assert not is_global_saturated(enriched("=>{0} p -> q"))


class TestReplay:
    """Test proof replay."""

    def test_apply_instance_reproduces_premises(self):
        """Test replay of a built instance."""
        e = enriched("=>{0} [ =>{1} < p =>{2} > ]")
        instance = only_instance(e, SaturationLevel.R4)
        assert apply_instance(e, instance) == instance.premises

    def test_stale_annotation_rejected(self):
        """Test that created annotations must be fresh."""
        e = enriched("=>{0} p -> q")
        instance = replace(only_instance(e, SaturationLevel.R3), created=(0,))
        with pytest.raises(ProofCheckError):
            apply_instance(e, instance)

    def test_wrong_principal_rejected(self):
        """Test that the principal must occur in the focus."""
        e = enriched("=>{0} p -> q")
        instance = replace(only_instance(e, SaturationLevel.R3), principal=(Imp(q, p),))
        with pytest.raises(ProofCheckError):
            apply_instance(e, instance)

    def test_valid_proof(self):
        """Test that a correct proof replays."""
        d = identity_proof()
        verify_proof(d)
        assert check_proof(d)
        assert d.size() == 2
        assert d.height() == 2
        assert len(d.leaves()) == 1

    def test_open_leaf_fails(self):
        """Test that a leaf without an axiom fails at its position."""
        d = identity_proof()
        d.children[0].instance = None
        with pytest.raises(ProofCheckError) as exc_info:
            verify_proof(d)
        assert exc_info.value.path == (0,)
        assert not check_proof(d)

    def test_tampered_child_fails(self):
        """Test that children must be exactly the replayed premises."""
        d = identity_proof()
        d.children[0].conclusion = enriched("=>{0} p -> p, < p =>{1} p, q >")
        with pytest.raises(ProofCheckError) as exc_info:
            verify_proof(d)
        assert exc_info.value.path == ()


class TestSerialization:
    """Test derivation output."""

    def test_text(self):
        """Test the indented text rendering."""
        assert derivation_to_text(identity_proof()).splitlines() == [
            "=>{0} p -> p    (ImpR_new at .)",
            "  =>{0} p -> p, < p =>{1} p >    (Id at <1>, axiomatic)",
        ]

    def test_dict(self):
        """Test the structured rendering."""
        data = derivation_to_dict(identity_proof())
        assert data["rule"] == "ImpR_new"
        assert data["focus"] == "."
        assert data["principal"] == ["p -> p"]
        assert data["created"] == [1]
        assert data["children"][0]["status"] == "axiomatic"
        assert data["children"][0]["children"] == []


class TestWorkedSteps:
    """Worked rule applications on larger sequents."""

    def test_inter_bc_copies_nested_blocks(self):
        """Test InterBC on an implication block that holds a modal block."""
        e = enriched("box r =>{1} q, [ r =>{2} s, < p =>{3} q, [ q =>{4} ] > ]")
        instance = only_instance(e, SaturationLevel.R4)
        assert instance.created == (5, 6, 7)
        assert instance.reliance_added == ((3, 6), (4, 7))
        assert print_sequent(instance.premises[0].root) == (
            "box r =>{1} q, < =>{5} [ p =>{6} q, [ q =>{7} ] ] >, "
            "[ r =>{2} s, < p =>{3} q, [ q =>{4} ] > ]"
        )
        assert instance.premises[0].rel == frozenset({(3, 6), (4, 7)})

    def test_unequal_sharp_parts_do_not_block(self):
        """Test that a block differing from its ancestor is not blocked."""
        s = parse_sequent("p =>{0} q&r, < p =>{1} q >")
        assert is_blocked(((IMPL, 1),), s) is None
        assert is_blocked((), s) is None

    def test_inter_bc_repeats_inner_reliance(self):
        """Test InterBC on a block that already holds a reliance pair."""
        e = enriched("=>{0} [ =>{1} < =>{2} [ =>{3} ] > ]", {(2, 3)})
        instance = only_instance(e, SaturationLevel.R4)
        assert instance.created == (4, 5, 6)
        assert instance.reliance_added == ((3, 6), (5, 6))
        assert print_sequent(instance.premises[0].root) == (
            "=>{0} < =>{4} [ =>{5} [ =>{6} ] ] >, [ =>{1} < =>{2} [ =>{3} ] > ]"
        )
        assert instance.premises[0].rel == frozenset({(2, 3), (3, 6), (5, 6)})
