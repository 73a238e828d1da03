"""
Unit tests for the models module.
"""

import pytest
from models import (
    BatchResult, IKProverError, LeafStatus, LoggingConfig, SearchBudget, SearchStats,
    TraceKind, TraceRecord, Verdict,
)

import ik_prover.core.models as core_models


class TestReExports:
    """Test that the top-level package mirrors the core models."""

    def test_same_objects(self):
        """Test that both import paths give the same classes."""
        assert SearchBudget is core_models.SearchBudget
        assert Verdict is core_models.Verdict


class TestSearchBudget:
    """Test SearchBudget class."""

    def test_search_budget_defaults(self):
        """Test SearchBudget default values."""
        budget = SearchBudget()

        assert budget.max_rule_applications == 1_000_000
        assert budget.max_seconds == 60.0

    def test_search_budget_custom_values(self):
        """Test SearchBudget with custom values."""
        budget = SearchBudget(max_rule_applications=10, max_seconds=0.5)

        assert budget.max_rule_applications == 10
        assert budget.max_seconds == 0.5

    @pytest.mark.parametrize("kwargs", [
        {"max_rule_applications": 0},
        {"max_rule_applications": -3},
        {"max_seconds": 0.0},
    ])
    def test_search_budget_must_be_positive(self, kwargs):
        """Test SearchBudget validation."""
        with pytest.raises(ValueError):
            SearchBudget(**kwargs)


class TestSearchStats:
    """Test SearchStats class."""

    def test_record_rule(self):
        """Test per-rule counters."""
        stats = SearchStats()
        stats.record_rule("AndL")
        stats.record_rule("AndL")
        stats.record_rule("BoxR")

        assert stats.rule_applications == 3
        assert stats.per_rule == {"AndL": 2, "BoxR": 1}

    def test_to_dict(self):
        """Test dictionary conversion."""
        stats = SearchStats(elapsed_seconds=0.1234567)
        stats.record_rule("Trans")
        stats.record_phase(2)
        data = stats.to_dict()

        assert data["rule_applications"] == 1
        assert data["per_rule"] == {"Trans": 1}
        assert data["phases"] == {"2": 1}
        assert data["elapsed_seconds"] == 0.123457


class TestTraceRecord:
    """Test TraceRecord class."""

    def test_rule_record(self):
        """Test the rule record fields."""
        record = TraceRecord(TraceKind.RULE, "<1>", rule="InterBC", created=(3, 4),
                             reliance_added=((2, 4),))

        assert record.to_dict() == {
            "kind": "rule", "focus": "<1>", "rule": "InterBC",
            "created": [3, 4], "reliance_added": [[2, 4]],
        }

    def test_block_record(self):
        """Test the block record fields."""
        record = TraceRecord(TraceKind.BLOCK, "<1><2>", blocked=2, blocker=1)

        assert record.to_dict() == {"kind": "block", "focus": "<1><2>", "blocked": 2, "blocker": 1}


class TestBatchResult:
    """Test BatchResult class."""

    def test_successful_row(self):
        """Test the output row of a decided line."""
        result = BatchResult(3, "p -> p", verdict=Verdict.PROVABLE, rule_applications=1)

        assert result.ok
        assert result.to_row() == ["3", "provable", "p -> p", "1"]

    def test_error_row(self):
        """Test the output row of a failed line."""
        result = BatchResult(4, "p ->", error="Unexpected input")

        assert not result.ok
        assert result.to_row() == ["4", "error", "p ->", "Unexpected input"]


class TestEnums:
    """Test enum values used in output."""

    def test_values(self):
        """Test the serialized names."""
        assert [v.value for v in Verdict] == ["provable", "unprovable", "budget_exceeded"]
        assert LeafStatus.SATURATED.value == "saturated"

    def test_logging_config_defaults(self):
        """Test LoggingConfig default values."""
        config = LoggingConfig()

        assert config.enable_logging is True
        assert config.log_level == "WARNING"
        assert config.logger_name == "ik_prover"

    def test_error_hierarchy(self):
        """Test the base error class."""
        assert issubclass(IKProverError, Exception)
