"""Analytic two-center electron repulsion integrals over Slater orbitals."""
from .engine import ConvergenceError, IntegralKind, IntegralResult, integral
from .orbital import Center, SlaterOrbital

__all__ = ["Center", "ConvergenceError", "IntegralKind", "IntegralResult", "SlaterOrbital", "integral"]
