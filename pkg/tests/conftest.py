"""
Pytest configuration and fixtures for the prover tests.
"""

import logging
import random

import pytest

from ik_prover.core.config import ProverConfig
from ik_prover.core.model import Model
from ik_prover.core.models import SearchBudget


@pytest.fixture
def prover_config():
    """Default configuration, independent of the environment."""
    return ProverConfig()


@pytest.fixture
def tracing_config():
    """Configuration with the search trace switched on."""
    return ProverConfig(trace=True)


@pytest.fixture
def small_budget():
    """Budget small enough to trip on any non-trivial search."""
    return SearchBudget(max_rule_applications=2, max_seconds=60.0)


@pytest.fixture
def rng():
    """Seeded generator; every property test starts from the same state."""
    return random.Random(20240601)


def _closure(worlds, pairs):
    leq = {(w, w) for w in worlds} | set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(leq):
            for c, d in list(leq):
                if b == c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return frozenset(leq)


@pytest.fixture
def dia_dual_countermodel():
    """
    Six-world countermodel of ``~dia ~p -> box p``: the chain 0<=1<=2<=5
    and 3<=6, with 2R3, 5R6 and p true only at 6.
    """
    worlds = frozenset({0, 1, 2, 3, 5, 6})
    leq = _closure(worlds, {(0, 1), (1, 2), (2, 5), (3, 6)})
    acc = frozenset({(2, 3), (5, 6)})
    val = {6: frozenset({"p"})}
    return Model(worlds, leq, acc, val, 0)


@pytest.fixture
def single_world_model():
    """One reflexive world, no accessibility, nothing true."""
    return Model(frozenset({0}), frozenset({(0, 0)}), frozenset(), {}, 0)


@pytest.fixture
def bc_violating_model():
    """0R1 and 1<=2, but no world above 0 sees 2."""
    worlds = frozenset({0, 1, 2})
    leq = _closure(worlds, {(1, 2)})
    return Model(worlds, leq, frozenset({(0, 1)}), {}, 0)


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Undo logging set up by CLI runs."""
    yield
    package_logger = logging.getLogger("ik_prover")
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
    package_logger.setLevel(logging.NOTSET)
    package_logger.propagate = True
