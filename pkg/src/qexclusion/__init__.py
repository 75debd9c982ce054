"""Quantum state exclusion as semidefinite programs."""
