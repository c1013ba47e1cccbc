"""Proof checker for Euclid-style proofs in the formal system E."""

__version__ = "0.1.0"
