"""Exact polynomial-system engine (regular chains, real root isolation,
parameter projection) and a Lie-algebra isomorphism decision tool built on it."""

__version__ = "0.1.0"
