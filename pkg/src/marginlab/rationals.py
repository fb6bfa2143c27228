"""Exact rational scalars used throughout the package.

Every numeric quantity here (loss entries, probabilities, scores, risk
values, LP data) is an exact rational; floating point never enters any
computation path.  Scalars are GMP-backed rationals (``gmpy2.mpq``),
which hash and compare interchangeably with ``fractions.Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from gmpy2 import mpq as Rational

RationalLike = Union[int, str, Fraction, Rational]

ZERO = Rational(0)
ONE = Rational(1)
HALF = Rational(1, 2)


def rat(value: RationalLike, denominator: RationalLike | None = None) -> Rational:
    """Coerce ``value`` (or ``value/denominator``) to an exact rational.

    Floats are rejected: a binary float would silently smuggle rounding
    into an otherwise exact pipeline.
    """
    if isinstance(value, float) or isinstance(denominator, float):
        raise TypeError("binary floats are not exact; pass int, str or Fraction")
    if denominator is None:
        return Rational(value)
    return Rational(value) / Rational(denominator)


def rational_str(value: Rational) -> str:
    """Canonical text form, e.g. ``'3/2'``, ``'-1'``.  Round-trips via rat()."""
    return str(Rational(value))
