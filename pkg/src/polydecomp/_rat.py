"""Helpers for exact rational scalars.

Scalars are plain ``int`` when integral and ``fractions.Fraction`` otherwise.
``normalize`` maintains that convention after arithmetic so the common
all-integer code paths stay on fast native ints; mixed int/Fraction
arithmetic is exact either way.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


def normalize(x: Rat) -> Rat:
    """Collapse integral Fractions to int; pass ints through."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return x.numerator
        return x
    return x


def to_rat(value) -> Rat:
    """Coerce an int, Fraction, or 'a/b' string to a normalized scalar."""
    if isinstance(value, int):
        return value
    return normalize(Fraction(value))


def divide(a: Rat, b: Rat) -> Rat:
    """Exact division of two scalars."""
    if b == 0:
        raise ZeroDivisionError("exact division by zero")
    return normalize(Fraction(a) / b)


def rat_str(x: Rat) -> str:
    """Render a scalar as 'a' or 'a/b' in lowest terms."""
    return str(x) if isinstance(x, int) else str(Fraction(x))
