"""
Configuration module for prover settings.
Loads configuration from environment variables and .env file.
"""

import os
from typing import Optional, Dict, Any
from dataclasses import dataclass
from dotenv import load_dotenv

from .models import SearchBudget, LoggingConfig

# Load environment variables from .env file
load_dotenv()

COUNTERMODEL_FORMATS = ("json", "dot", "text")


@dataclass
class ProverConfig:
    """Configuration for proof search, verification and output."""

    # Budget settings
    max_rule_applications: int = 1_000_000
    max_seconds: float = 60.0

    # Verification settings
    check_proofs: bool = True
    verify_countermodels: bool = True
    strict_invariants: bool = False

    # Output settings
    trace: bool = False
    countermodel_format: str = "json"

    # Oracle and batch settings
    oracle_max_worlds: int = 3
    batch_workers: int = 1

    # Logging settings
    enable_logging: bool = True
    log_level: str = "WARNING"

    # Reserved; the search is deterministic regardless
    seed: Optional[int] = None

    @classmethod
    def from_env(cls) -> 'ProverConfig':
        """Create configuration from environment variables."""
        return cls(
            # Budget settings
            max_rule_applications=int(os.getenv('IKP_MAX_STEPS', '1000000')),
            max_seconds=float(os.getenv('IKP_TIMEOUT', '60.0')),

            # Verification settings
            check_proofs=cls._parse_boolean(os.getenv('IKP_CHECK_PROOFS', 'true'), True),
            verify_countermodels=cls._parse_boolean(os.getenv('IKP_VERIFY_MODELS', 'true'), True),
            strict_invariants=cls._parse_boolean(os.getenv('IKP_STRICT_INVARIANTS', 'false'), False),

            # Output settings
            trace=cls._parse_boolean(os.getenv('IKP_TRACE', 'false'), False),
            countermodel_format=cls._parse_format(os.getenv('IKP_COUNTERMODEL_FORMAT', 'json')),

            # Oracle and batch settings
            oracle_max_worlds=int(os.getenv('IKP_ORACLE_MAX_WORLDS', '3')),
            batch_workers=max(1, int(os.getenv('IKP_BATCH_WORKERS', '1'))),

            # Logging settings
            enable_logging=cls._parse_boolean(os.getenv('IKP_ENABLE_LOGGING', 'true'), True),
            log_level=os.getenv('IKP_LOG_LEVEL', 'WARNING'),

            seed=int(os.getenv('IKP_SEED')) if os.getenv('IKP_SEED') else None,
        )

    @staticmethod
    def _parse_boolean(value: str, default: bool) -> bool:
        """Parse boolean value from string with default fallback."""
        if value.lower() in ('true', '1', 'yes', 'on'):
            return True
        elif value.lower() in ('false', '0', 'no', 'off'):
            return False
        else:
            return default

    @staticmethod
    def _parse_format(value: str) -> str:
        """Normalise a countermodel format name, falling back to json."""
        value = value.strip().lower()
        return value if value in COUNTERMODEL_FORMATS else "json"

    def budget(self) -> SearchBudget:
        """Search budget described by this configuration."""
        return SearchBudget(
            max_rule_applications=self.max_rule_applications,
            max_seconds=self.max_seconds,
        )

    def logging_config(self) -> LoggingConfig:
        return LoggingConfig(enable_logging=self.enable_logging, log_level=self.log_level)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            'max_rule_applications': self.max_rule_applications,
            'max_seconds': self.max_seconds,
            'check_proofs': self.check_proofs,
            'verify_countermodels': self.verify_countermodels,
            'strict_invariants': self.strict_invariants,
            'trace': self.trace,
            'countermodel_format': self.countermodel_format,
            'oracle_max_worlds': self.oracle_max_worlds,
            'batch_workers': self.batch_workers,
            'enable_logging': self.enable_logging,
            'log_level': self.log_level,
            'seed': self.seed,
        }


def get_config() -> ProverConfig:
    """Get the default configuration from environment variables."""
    return ProverConfig.from_env()


def get_config_for_profile(profile: str) -> ProverConfig:
    """Get configuration for a named profile with prefixed environment variables."""
    prefix = f"{profile.upper()}_"

    config = ProverConfig.from_env()

    # Budget settings
    config.max_rule_applications = int(os.getenv(f'{prefix}MAX_STEPS', str(config.max_rule_applications)))
    config.max_seconds = float(os.getenv(f'{prefix}TIMEOUT', str(config.max_seconds)))

    # Verification settings
    config.check_proofs = ProverConfig._parse_boolean(
        os.getenv(f'{prefix}CHECK_PROOFS', str(config.check_proofs)), config.check_proofs
    )
    config.verify_countermodels = ProverConfig._parse_boolean(
        os.getenv(f'{prefix}VERIFY_MODELS', str(config.verify_countermodels)), config.verify_countermodels
    )
    config.strict_invariants = ProverConfig._parse_boolean(
        os.getenv(f'{prefix}STRICT_INVARIANTS', str(config.strict_invariants)), config.strict_invariants
    )

    # Output settings
    config.trace = ProverConfig._parse_boolean(os.getenv(f'{prefix}TRACE', str(config.trace)), config.trace)
    config.countermodel_format = ProverConfig._parse_format(
        os.getenv(f'{prefix}COUNTERMODEL_FORMAT', config.countermodel_format)
    )

    # Oracle and batch settings
    config.oracle_max_worlds = int(os.getenv(f'{prefix}ORACLE_MAX_WORLDS', str(config.oracle_max_worlds)))
    config.batch_workers = max(1, int(os.getenv(f'{prefix}BATCH_WORKERS', str(config.batch_workers))))

    # Logging settings
    config.log_level = os.getenv(f'{prefix}LOG_LEVEL', config.log_level)

    return config
