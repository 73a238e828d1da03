"""Top-level models package.

This re-exports all public symbols from `ik_prover.core.models` so projects
can import shared models via `models` as well as `ik_prover.core.models`.
"""

from ik_prover.core.models import *  # noqa: F401,F403
