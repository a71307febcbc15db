"""Truncated 1+1D Dirac field theory: Fock-exact and mode-sum Schwinger-term checks."""

__version__ = "0.1.0"
