"""
Command Line Interface for the IK prover.

Subcommands:

* ``prove FORMULA``: decide a formula; ``--batch FILE`` decides one formula per line
* ``check MODEL FORMULA``: check that a JSON model refutes a formula at its root
* ``translate``: translate a labelled or polarised sequent, optionally proving it
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO

from common.json_utils import from_json_file, pretty_json, write_json_lines

from ..core.calculus import derivation_to_dict, derivation_to_text
from ..core.config import COUNTERMODEL_FORMATS, ProverConfig, get_config
from ..core.formula import parse, print_formula
from ..core.model import (
    Model, check_frame, extract_countermodel, forces, model_from_dict, model_to_dict,
    model_to_dot, model_to_text,
)
from ..core.models import BatchResult, IKProverError, Verdict
from ..core.oracle import oracle_agrees
from ..core.search import SearchOutcome, proof_search
from ..core.sequent import print_sequent
from ..core.translate import (
    fl_nested, flatten, parse_labelled, parse_polarised, tr_labelled, translate_and_prove,
)
from ..core.utils import configure_logging, shorten
from ..patterns.batch import BatchConfig, BatchRunner

logger = logging.getLogger(__name__)

EXIT_PROVABLE = 0
EXIT_UNPROVABLE = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3

VERDICT_EXIT_CODES = {
    Verdict.PROVABLE: EXIT_PROVABLE,
    Verdict.UNPROVABLE: EXIT_UNPROVABLE,
    Verdict.BUDGET_EXCEEDED: EXIT_BUDGET,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the prove, check and translate subcommands."""
    parser = argparse.ArgumentParser(
        prog="ikp",
        description="Decision procedure for intuitionistic modal logic IK with proofs and countermodels"
    )

    parser.add_argument(
        "--log-level",
        help="Log level for the ik_prover logger (overrides IKP_LOG_LEVEL)"
    )

    subparsers = parser.add_subparsers(dest="command", required=True)

    prove = subparsers.add_parser("prove", help="Decide a formula")
    prove.add_argument(
        "formula",
        nargs="?",
        help="Formula, e.g. \"box (p -> q) -> (box p -> box q)\""
    )
    prove.add_argument(
        "--batch",
        metavar="FILE",
        help="Decide every formula in FILE, one per line, '#' starts a comment"
    )
    prove.add_argument(
        "--proof",
        action="store_true",
        help="Print the replay-checked derivation of a provable formula"
    )
    prove.add_argument(
        "--countermodel",
        choices=COUNTERMODEL_FORMATS,
        help="Print the verified countermodel of an unprovable formula"
    )
    prove.add_argument(
        "--json",
        action="store_true",
        help="Print the outcome as JSON"
    )
    prove.add_argument(
        "--oracle",
        action="store_true",
        help="Cross-check the verdict against small models (bound IKP_ORACLE_MAX_WORLDS)"
    )
    _add_budget_arguments(prove)
    prove.add_argument(
        "--trace",
        metavar="FILE",
        help="Write the search trace as JSON lines to FILE, '-' for stdout"
    )

    check = subparsers.add_parser("check", help="Check a countermodel against a formula")
    check.add_argument(
        "model",
        help="Model file in the JSON countermodel format"
    )
    check.add_argument(
        "formula",
        help="Formula the model should refute at its root"
    )

    translate = subparsers.add_parser("translate", help="Translate a labelled or polarised sequent")
    source = translate.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--labelled",
        metavar="TEXT",
        help="Labelled sequent, e.g. \"x<=y; yRz; z:A |- x:A&B\""
    )
    source.add_argument(
        "--polarised",
        metavar="TEXT",
        help="Polarised nested sequent or context, e.g. \"+A, -B, [ +C, {} ]\""
    )
    translate.add_argument(
        "--fill",
        metavar="TEXT",
        help="Polarised sequent filling the hole of --polarised"
    )
    translate.add_argument(
        "--prove",
        action="store_true",
        help="Run proof search on the translation"
    )
    _add_budget_arguments(translate)

    return parser


def _add_budget_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--max-steps",
        type=int,
        help="Maximum number of rule applications (overrides IKP_MAX_STEPS)"
    )
    parser.add_argument(
        "--timeout",
        type=float,
        help="Search timeout in seconds (overrides IKP_TIMEOUT)"
    )


def _apply_overrides(config: ProverConfig, args: argparse.Namespace) -> ProverConfig:
    updates = {}
    if getattr(args, "max_steps", None) is not None:
        updates["max_rule_applications"] = args.max_steps
    if getattr(args, "timeout", None) is not None:
        updates["max_seconds"] = args.timeout
    if getattr(args, "trace", None):
        updates["trace"] = True
    if getattr(args, "countermodel", None):
        updates["countermodel_format"] = args.countermodel
    if args.log_level:
        updates["log_level"] = args.log_level
    return replace(config, **updates)


def render_model(m: Model, fmt: str) -> str:
    """Countermodel in one of the output formats."""
    if fmt == "dot":
        return model_to_dot(m)
    if fmt == "text":
        return model_to_text(m)
    return pretty_json(model_to_dict(m))


@contextmanager
def _open_output(target: str) -> Iterator[TextIO]:
    if target == "-":
        yield sys.stdout
        return
    with open(target, "w", encoding="utf-8") as stream:
        yield stream


def _report_outcome(outcome: SearchOutcome, args: argparse.Namespace, config: ProverConfig) -> None:
    model = None
    if outcome.unprovable and (args.countermodel or args.json):
        model = extract_countermodel(outcome.leaf, verify=config.verify_countermodels)

    if args.json:
        data = outcome.to_dict()
        if args.proof and outcome.provable:
            data["proof"] = derivation_to_dict(outcome.derivation)
        if model is not None:
            data["countermodel"] = model_to_dict(model)
        print(pretty_json(data))
    else:
        print(outcome.verdict.value)
        if args.proof and outcome.provable:
            print(derivation_to_text(outcome.derivation))
        if model is not None:
            print(render_model(model, config.countermodel_format))
        if outcome.budget_error is not None:
            print(f"Budget exceeded: {outcome.budget_error}", file=sys.stderr)

    if args.trace:
        with _open_output(args.trace) as stream:
            count = write_json_lines(stream, outcome.trace)
        logger.info(f"Wrote {count} trace records to {args.trace}")


def run_prove(args: argparse.Namespace, config: ProverConfig) -> int:
    """Decide one formula; exit 0 provable, 1 unprovable, 3 budget exceeded."""
    if args.batch:
        return run_batch(args.batch, config)
    if not args.formula:
        print("Error: a formula or --batch FILE is required", file=sys.stderr)
        return EXIT_ERROR
    formula = parse(args.formula)
    outcome = proof_search(formula, config.budget(), config)
    _report_outcome(outcome, args, config)
    if args.oracle and outcome.verdict is not Verdict.BUDGET_EXCEEDED:
        if not oracle_agrees(formula, outcome.verdict, config.oracle_max_worlds):
            print(f"Oracle disagrees: a model with at most {config.oracle_max_worlds} worlds "
                  f"refutes {shorten(print_formula(formula))}", file=sys.stderr)
            return EXIT_ERROR
        logger.info(f"Oracle agrees within {config.oracle_max_worlds} worlds")
    return VERDICT_EXIT_CODES[outcome.verdict]


def read_batch(path: str) -> List[BatchResult]:
    """Formula lines of a batch file, without blank lines and comments."""
    entries = []
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        source = line.split("#", 1)[0].strip()
        if source:
            entries.append(BatchResult(line_number=number, source=source))
    return entries


def decide_line(entry: BatchResult, config: ProverConfig) -> BatchResult:
    """Decide the formula of one batch line; errors are recorded, not raised."""
    try:
        outcome = proof_search(parse(entry.source), config.budget(), config)
        if outcome.unprovable and config.verify_countermodels:
            extract_countermodel(outcome.leaf)
    except (IKProverError, ValueError) as e:
        message = shorten(" ".join(str(e).split()))
        logger.warning(f"Line {entry.line_number} failed: {message}")
        return replace(entry, error=message)
    return replace(
        entry,
        verdict=outcome.verdict,
        rule_applications=outcome.stats.rule_applications,
        elapsed_seconds=outcome.stats.elapsed_seconds,
    )


def run_batch(path: str, config: ProverConfig) -> int:
    """Decide every line of a batch file; exit 2 iff some line errored."""
    entries = read_batch(path)
    runner = BatchRunner(BatchConfig(max_workers=config.batch_workers))
    results = runner.map(lambda entry: decide_line(entry, config), entries)
    for result in results:
        print("\t".join(result.to_row()))
    failed = sum(1 for result in results if not result.ok)
    logger.info(f"Batch {path}: {len(results)} lines, {failed} errors")
    return EXIT_ERROR if failed else 0


def run_check(args: argparse.Namespace, config: ProverConfig) -> int:
    """Exit 0 when the model is frame-valid and refutes the formula, 1 when it forces it, 2 on violations."""
    model = model_from_dict(from_json_file(args.model))
    formula = parse(args.formula)
    violations = check_frame(model)
    if violations:
        for violation in violations:
            print(f"Frame violation: {violation}")
        return EXIT_ERROR
    if forces(model, model.root, formula):
        print(f"root {model.root} forces {print_formula(formula)}")
        return EXIT_UNPROVABLE
    print(f"countermodel: root {model.root} does not force {print_formula(formula)}")
    return 0


def run_translate(args: argparse.Namespace, config: ProverConfig) -> int:
    """Print the translated sequent; with --prove, exit with the verdict code."""
    if args.labelled is not None:
        source = parse_labelled(args.labelled)
        filler = None
    else:
        source = parse_polarised(args.polarised)
        filler = parse_polarised(args.fill) if args.fill is not None else None

    if args.prove:
        translated, outcome = translate_and_prove(source, filler, config.budget(), config)
        print(print_sequent(translated))
        print(outcome.verdict.value)
        return VERDICT_EXIT_CODES[outcome.verdict]

    if args.labelled is not None:
        translated = tr_labelled(source)
    elif filler is not None:
        translated = fl_nested(source, filler)
    else:
        translated = flatten(source)
    print(print_sequent(translated))
    return 0


COMMANDS = {
    "prove": run_prove,
    "check": run_check,
    "translate": run_translate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = _apply_overrides(get_config(), args)
        configure_logging(config.logging_config())
        return COMMANDS[args.command](args, config)
    except KeyboardInterrupt:
        print("\nSearch cancelled by user", file=sys.stderr)
        return EXIT_ERROR
    except (IKProverError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
