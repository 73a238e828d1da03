"""
Unit tests for the configuration module.
"""

import os
from unittest.mock import patch

import pytest

from ik_prover.core.config import ProverConfig, get_config, get_config_for_profile
from ik_prover.core.models import LoggingConfig, SearchBudget


class TestProverConfig:
    """Test ProverConfig class."""

    def test_prover_config_defaults(self):
        """Test ProverConfig default values."""
        config = ProverConfig()

        assert config.max_rule_applications == 1_000_000
        assert config.max_seconds == 60.0
        assert config.check_proofs is True
        assert config.verify_countermodels is True
        assert config.strict_invariants is False
        assert config.trace is False
        assert config.countermodel_format == "json"
        assert config.oracle_max_worlds == 3
        assert config.batch_workers == 1
        assert config.enable_logging is True
        assert config.log_level == "WARNING"
        assert config.seed is None

    @patch.dict(os.environ, {}, clear=True)
    def test_from_env_without_variables(self):
        """Test that an empty environment gives the defaults."""
        assert ProverConfig.from_env() == ProverConfig()

    @patch.dict(os.environ, {
        'IKP_MAX_STEPS': '500',
        'IKP_TIMEOUT': '2.5',
        'IKP_CHECK_PROOFS': 'false',
        'IKP_VERIFY_MODELS': 'no',
        'IKP_STRICT_INVARIANTS': 'yes',
        'IKP_TRACE': '1',
        'IKP_COUNTERMODEL_FORMAT': ' DOT ',
        'IKP_ORACLE_MAX_WORLDS': '2',
        'IKP_BATCH_WORKERS': '4',
        'IKP_ENABLE_LOGGING': 'off',
        'IKP_LOG_LEVEL': 'DEBUG',
        'IKP_SEED': '7',
    }, clear=True)
    def test_from_env(self):
        """Test reading every variable."""
        config = ProverConfig.from_env()

        assert config.max_rule_applications == 500
        assert config.max_seconds == 2.5
        assert config.check_proofs is False
        assert config.verify_countermodels is False
        assert config.strict_invariants is True
        assert config.trace is True
        assert config.countermodel_format == "dot"
        assert config.oracle_max_worlds == 2
        assert config.batch_workers == 4
        assert config.enable_logging is False
        assert config.log_level == "DEBUG"
        assert config.seed == 7

    @patch.dict(os.environ, {'IKP_COUNTERMODEL_FORMAT': 'svg', 'IKP_BATCH_WORKERS': '0'}, clear=True)
    def test_from_env_fallbacks(self):
        """Test unknown formats and non-positive worker counts."""
        config = ProverConfig.from_env()

        assert config.countermodel_format == "json"
        assert config.batch_workers == 1

    @patch.dict(os.environ, {'IKP_MAX_STEPS': 'many'}, clear=True)
    def test_from_env_invalid_number(self):
        """Test that a malformed number raises ValueError."""
        with pytest.raises(ValueError):
            ProverConfig.from_env()

    @pytest.mark.parametrize("value, default, expected", [
        ("TRUE", False, True),
        ("on", False, True),
        ("0", True, False),
        ("maybe", True, True),
        ("maybe", False, False),
    ])
    def test_parse_boolean(self, value, default, expected):
        """Test boolean parsing with default fallback."""
        assert ProverConfig._parse_boolean(value, default) is expected

    def test_budget(self):
        """Test the derived search budget."""
        config = ProverConfig(max_rule_applications=10, max_seconds=1.5)

        assert config.budget() == SearchBudget(max_rule_applications=10, max_seconds=1.5)

    def test_logging_config(self):
        """Test the derived logging configuration."""
        config = ProverConfig(enable_logging=False, log_level="INFO")

        assert config.logging_config() == LoggingConfig(enable_logging=False, log_level="INFO")

    def test_to_dict(self):
        """Test ProverConfig to_dict method."""
        result = ProverConfig(trace=True, seed=3).to_dict()

        assert result["trace"] is True
        assert result["seed"] == 3
        assert set(result) == {
            "max_rule_applications", "max_seconds", "check_proofs", "verify_countermodels",
            "strict_invariants", "trace", "countermodel_format", "oracle_max_worlds",
            "batch_workers", "enable_logging", "log_level", "seed",
        }


class TestConfigFunctions:
    """Test module-level helpers."""

    @patch.dict(os.environ, {'IKP_MAX_STEPS': '42'}, clear=True)
    def test_get_config(self):
        """Test the default configuration loader."""
        assert get_config().max_rule_applications == 42

    @patch.dict(os.environ, {
        'IKP_MAX_STEPS': '42',
        'CI_MAX_STEPS': '5',
        'CI_TRACE': 'true',
        'CI_COUNTERMODEL_FORMAT': 'text',
        'CI_BATCH_WORKERS': '-2',
    }, clear=True)
    def test_get_config_for_profile(self):
        """Test that prefixed variables override the base ones."""
        config = get_config_for_profile("ci")

        assert config.max_rule_applications == 5
        assert config.trace is True
        assert config.countermodel_format == "text"
        assert config.batch_workers == 1
        assert config.max_seconds == 60.0

    @patch.dict(os.environ, {'IKP_TIMEOUT': '9'}, clear=True)
    def test_profile_falls_back_to_base(self):
        """Test a profile without its own variables."""
        config = get_config_for_profile("nightly")

        assert config.max_seconds == 9.0
        assert config.check_proofs is True
