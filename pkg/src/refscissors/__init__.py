"""Refined scissors congruence, Witt and homology computations over finite rings."""

__version__ = "0.1.0"
