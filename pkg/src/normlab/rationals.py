"""Exact rational scalars.

The whole library computes over the rational subfield of the reals:
``fractions.Fraction`` already guarantees lowest terms, a positive
denominator, exact field operations, and a total order, so it is used
directly.  No floating point enters the core anywhere.

Restricting the scalar field from the reals to the rationals is a modeling
choice made so that every order statement checked here is decidable; all
constructions in scope use only rational constants.
"""

from fractions import Fraction

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce an int, Fraction, or "p/q" string to an exact rational.

    Floats are rejected: silently accepting them would smuggle rounding
    into a library whose contract is exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot build an exact rational from {type(value).__name__}")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "p" or "p/q"."""
    q = rat(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
