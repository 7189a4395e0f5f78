"""Ground field modes and constant square classes."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from math import isqrt

from sympy import factorint


class GroundMode(Enum):
    """How the ground field is modelled.

    ``EXACT`` is honest computation over the rationals.  ``CLOSED`` stands in
    for an algebraically closed ground field of characteristic zero: every
    nonzero constant counts as a square and Tsen's theorem is available.
    """

    EXACT = "exact"
    CLOSED = "closed"

    @classmethod
    def parse(cls, text: str | GroundMode) -> GroundMode:
        if isinstance(text, GroundMode):
            return text
        aliases = {"exact": cls.EXACT, "exactrational": cls.EXACT,
                   "closed": cls.CLOSED, "symbolicclosed": cls.CLOSED}
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown ground mode {text!r}") from None


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not a rational constant: {c!r}")


def integer_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def rational_sqrt(c) -> Fraction | None:
    """Nonnegative rational square root of ``c``, or None."""
    c = as_fraction(c)
    if c < 0:
        return None
    rn = integer_sqrt(c.numerator)
    rd = integer_sqrt(c.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def is_square_constant(c, mode: GroundMode) -> bool:
    c = as_fraction(c)
    if mode is GroundMode.CLOSED:
        return c != 0
    return c != 0 and rational_sqrt(c) is not None


def squarefree_kernel(c) -> int:
    """Signed squarefree integer in the square class of the nonzero rational ``c``."""
    c = as_fraction(c)
    if c == 0:
        raise ValueError("zero has no square class")
    n = abs(c.numerator * c.denominator)
    k = 1
    for p, e in factorint(n).items():
        if e % 2:
            k *= p
    return k if c > 0 else -k
