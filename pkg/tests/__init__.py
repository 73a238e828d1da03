"""Tests for the IK prover packages."""
