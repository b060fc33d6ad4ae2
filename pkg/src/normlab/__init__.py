"""Exact-arithmetic insertion, separation, and compactness checks.

Two computable carriers, finite topological spaces and eventually periodic
sequences over the compactified naturals, support constructive insertion
algorithms, condition checkers with machine-verifiable certificates, and an
independent replay verifier.  Everything runs over exact rationals.
"""

from .rationals import Rational, rat, rat_str

__version__ = "0.1.0"

__all__ = ["Rational", "rat", "rat_str", "__version__"]
