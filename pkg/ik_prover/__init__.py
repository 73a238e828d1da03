"""
IK Prover Package

A terminating proof search for intuitionistic modal logic IK over annotated
bi-nested sequents, featuring:
- Replay-checked derivations for provable formulas
- Verified bi-relational countermodels for unprovable ones
- A bounded brute-force oracle for cross-checking verdicts
- Translations from labelled and polarised nested sequents
- Environment-based configuration
"""

__version__ = "1.0.0"

# Core imports
from .core.config import ProverConfig, get_config, get_config_for_profile
from .core.models import (
    IKProverError, Verdict, LeafStatus, SearchBudget, SearchStats, TraceRecord,
    LoggingConfig, BatchResult
)
from .core.formula import (
    Formula, Atom, Bottom, Top, And, Or, Imp, Box, Dia, BOTTOM, TOP,
    FormulaSyntaxError, parse, print_formula, neg, atoms, size, modal_depth
)
from .core.sequent import (
    Sequent, EnrichedSequent, BlockKind, SequentSyntaxError, AnnotationError,
    parse_sequent, print_sequent, components, renumber
)
from .core.calculus import (
    RuleId, SaturationLevel, RuleInstance, Derivation, ProofCheckError,
    check_proof, verify_proof, derivation_to_text, derivation_to_dict
)
from .core.search import (
    SearchOutcome, SearchError, InvariantViolation, ProofSearch,
    proof_search, prove_sequent
)
from .core.model import (
    Model, CountermodelError, TruthLemmaViolation, check_frame, forces,
    extract_countermodel, model_to_dict, model_from_dict, model_to_text, model_to_dot
)
from .core.oracle import bounded_countermodel_search, oracle_agrees, random_formula, axiom_corpus
from .core.translate import (
    TranslationError, LabelledSequent, PolarisedNestedSequent, parse_labelled,
    parse_polarised, is_tree_like, tr_labelled, fl_nested, flatten, contextualise,
    translate_and_prove
)
from .patterns.budget import BudgetExceededError, BudgetGuard

__all__ = [
    # Configuration
    "ProverConfig",
    "get_config",
    "get_config_for_profile",

    # Shared models
    "IKProverError",
    "Verdict",
    "LeafStatus",
    "SearchBudget",
    "SearchStats",
    "TraceRecord",
    "LoggingConfig",
    "BatchResult",

    # Formulas
    "Formula",
    "Atom",
    "Bottom",
    "Top",
    "And",
    "Or",
    "Imp",
    "Box",
    "Dia",
    "BOTTOM",
    "TOP",
    "FormulaSyntaxError",
    "parse",
    "print_formula",
    "neg",
    "atoms",
    "size",
    "modal_depth",

    # Sequents
    "Sequent",
    "EnrichedSequent",
    "BlockKind",
    "SequentSyntaxError",
    "AnnotationError",
    "parse_sequent",
    "print_sequent",
    "components",
    "renumber",

    # Calculus and search
    "RuleId",
    "SaturationLevel",
    "RuleInstance",
    "Derivation",
    "ProofCheckError",
    "check_proof",
    "verify_proof",
    "derivation_to_text",
    "derivation_to_dict",
    "SearchOutcome",
    "SearchError",
    "InvariantViolation",
    "ProofSearch",
    "proof_search",
    "prove_sequent",

    # Models and oracle
    "Model",
    "CountermodelError",
    "TruthLemmaViolation",
    "check_frame",
    "forces",
    "extract_countermodel",
    "model_to_dict",
    "model_from_dict",
    "model_to_text",
    "model_to_dot",
    "bounded_countermodel_search",
    "oracle_agrees",
    "random_formula",
    "axiom_corpus",

    # Translations
    "TranslationError",
    "LabelledSequent",
    "PolarisedNestedSequent",
    "parse_labelled",
    "parse_polarised",
    "is_tree_like",
    "tr_labelled",
    "fl_nested",
    "flatten",
    "contextualise",
    "translate_and_prove",

    # Budget
    "BudgetExceededError",
    "BudgetGuard",
]
