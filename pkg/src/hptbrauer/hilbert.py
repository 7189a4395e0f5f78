"""Local Hilbert symbols over the rationals."""
from __future__ import annotations

from fractions import Fraction

from sympy import factorint, isprime

from .fieldcore.ground import as_fraction

INFINITY = "inf"


class InvalidPlace(ValueError):
    pass


def _as_integer_class(c) -> int:
    # n/d and n*d share a square class
    c = as_fraction(c)
    if c == 0:
        raise ValueError("Hilbert symbol of zero")
    return c.numerator * c.denominator


def _split(n: int, p: int) -> tuple:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def hilbert_symbol(a, b, place) -> int:
    """(a, b)_place in {+1, -1}; place is a prime integer or INFINITY."""
    a, b = _as_integer_class(a), _as_integer_class(b)
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(place, int) or isinstance(place, bool) or not isprime(place):
        raise InvalidPlace(f"{place!r} is neither a prime nor {INFINITY!r}")
    p = place
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(v, p)
    return sign


def support_places(*values) -> list:
    """2, the primes dividing the given rationals, and INFINITY."""
    primes = {2}
    for c in values:
        primes.update(factorint(abs(_as_integer_class(c))))
    primes.discard(1)
    return sorted(primes) + [INFINITY]


def is_split_over_rationals(a, b) -> bool:
    return all(hilbert_symbol(a, b, p) == 1 for p in support_places(a, b))


def ramified_places(pairs) -> list:
    """Places where the sum of the quaternion symbols over Q has nonzero invariant."""
    pairs = [(Fraction(a), Fraction(b)) for a, b in pairs]
    places = support_places(*[c for ab in pairs for c in ab]) if pairs else []
    out = []
    for p in places:
        s = 1
        for a, b in pairs:
            s *= hilbert_symbol(a, b, p)
        if s == -1:
            out.append(p)
    return out
