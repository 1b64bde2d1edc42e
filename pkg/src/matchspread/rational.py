"""Exact-rational helpers and the string codec used by the JSON schemas.

Probabilities and certificate values are exchanged as strings so that no
precision is lost in serialization: "3/10", "0.3" and "1" all parse to the
same Fraction. Plain floats are converted exactly (every float is a dyadic
rational).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def to_fraction(value) -> Fraction:
    """Coerce ints, rationals, floats and strings to an exact Fraction."""
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def fraction_str(value) -> str:
    """Canonical string form: integer, or 'num/den' in lowest terms."""
    f = to_fraction(value)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def check_probability(value: Fraction, what: str = "probability") -> Fraction:
    if not 0 <= value <= 1:
        raise ValueError(f"{what} {value} outside [0, 1]")
    return value
