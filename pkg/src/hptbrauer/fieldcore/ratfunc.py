"""Normalized rational functions and exact substitution."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .ground import as_fraction
from .mpoly import MPoly
from .polyalg import gcd, rational_content


class DivisionByZeroPolynomial(ZeroDivisionError):
    pass


class DenominatorVanishes(ZeroDivisionError):
    pass


class RatFunc:
    """num/den with gcd(num, den) constant and den primitive with positive leading coefficient."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("RatFunc numerator may not be a RatFunc when den is given")
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if not isinstance(num, MPoly):
            raise TypeError(f"expected MPoly, got {type(num).__name__}")
        if den is None:
            den = MPoly.const(1, num.variables)
        elif isinstance(den, (int, Fraction)):
            den = MPoly.const(den, num.variables)
        if den.variables != num.variables:
            raise ValueError("numerator and denominator over different variables")
        if den.is_zero():
            raise DivisionByZeroPolynomial("denominator is the zero polynomial")
        if num.is_zero():
            den = MPoly.const(1, num.variables)
        elif not den.is_constant():
            g = gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
        c = rational_content(den)
        if c != 1:
            num, den = num * (1 / c), den * (1 / c)
        self.num, self.den, self._hash = num, den, None

    @classmethod
    def const(cls, c, variables) -> RatFunc:
        return cls(MPoly.const(c, variables))

    @classmethod
    def var(cls, name, variables) -> RatFunc:
        return cls(MPoly.var(name, variables))

    @property
    def variables(self) -> tuple:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MPoly:
        if not self.den.is_constant():
            raise ValueError(f"{self} is not a polynomial")
        return self.num * (1 / self.den.constant_value())

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def with_variables(self, variables) -> RatFunc:
        return RatFunc(self.num.with_variables(variables), self.den.with_variables(variables))

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.variables != self.variables:
                raise ValueError(f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, MPoly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other, self.variables)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        r.num, r.den, r._hash = -self.num, self.den, None
        return r

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _cross(self.num, self.den, o.num, o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZeroPolynomial("division by the zero rational function")
        return _cross(self.num, self.den, o.den, o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            if self.is_zero():
                raise DivisionByZeroPolynomial("negative power of zero")
            return RatFunc(self.den ** -k, self.num ** -k)
        return RatFunc(self.num ** k, self.den ** k)

    def inverse(self) -> RatFunc:
        return self ** -1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MPoly):
            other = RatFunc(other)
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r}, {list(self.variables)})"


def as_ratfunc(value, variables=None) -> RatFunc:
    if isinstance(value, RatFunc):
        return value if variables is None else value.with_variables(variables)
    if isinstance(value, MPoly):
        return RatFunc(value if variables is None else value.with_variables(variables))
    if isinstance(value, (int, Fraction)):
        if variables is None:
            raise ValueError("a variable list is needed to lift a constant")
        return RatFunc.const(value, variables)
    raise TypeError(f"cannot interpret {value!r} as a rational function")


def _subst_poly(p: MPoly, values: dict) -> tuple:
    """Numerator/denominator pair of p after substitution (no normalization)."""
    variables = p.variables
    idx = {p.index(v): val for v, val in values.items()}
    max_deg = {i: max((e[i] for e in p.terms), default=0) for i in idx}
    num_pows = {i: [MPoly.const(1, variables)] for i in idx}
    den_pows = {i: [MPoly.const(1, variables)] for i in idx}
    for i, val in idx.items():
        for _ in range(max_deg[i]):
            num_pows[i].append(num_pows[i][-1] * val.num)
            den_pows[i].append(den_pows[i][-1] * val.den)
    num = MPoly.zero(variables)
    for e, c in p.terms.items():
        rest = tuple(0 if i in idx else k for i, k in enumerate(e))
        t = MPoly._raw(variables, {rest: c})
        for i in idx:
            t = t * num_pows[i][e[i]] * den_pows[i][max_deg[i] - e[i]]
        num = num + t
    den = MPoly.const(1, variables)
    for i in idx:
        den = den * den_pows[i][max_deg[i]]
    return num, den


def substitute(p, assignment: Mapping[str, object]) -> RatFunc:
    """Simultaneously replace variables by rational functions, returning a normalized RatFunc."""
    f = as_ratfunc(p)
    variables = f.variables
    values = {}
    for v, val in assignment.items():
        if v not in variables:
            raise ValueError(f"{v!r} not among {variables}")
        if isinstance(val, (int, Fraction, str)):
            val = RatFunc.const(as_fraction(val), variables)
        values[v] = as_ratfunc(val)
        if values[v].variables != variables:
            raise ValueError("substituted value over a different variable list")
    if not values:
        return f
    nn, nd = _subst_poly(f.num, values)
    dn, dd = _subst_poly(f.den, values)
    if dn.is_zero():
        raise DenominatorVanishes(f"denominator {f.den} vanishes under {assignment}")
    return RatFunc(nn * dd, nd * dn)


def _cross(a: MPoly, b: MPoly, c: MPoly, d: MPoly) -> RatFunc:
    # (a/b) * (c/d) with a/b and c/d reduced: only a, d and c, b can share factors
    if a.is_zero() or c.is_zero():
        return RatFunc(MPoly.zero(a.variables))
    g1, g2 = gcd(a, d), gcd(c, b)
    if not g1.is_constant():
        a, d = a.exact_div(g1), d.exact_div(g1)
    if not g2.is_constant():
        c, b = c.exact_div(g2), b.exact_div(g2)
    num, den = a * c, b * d
    k = rational_content(den)
    if k != 1:
        num, den = num * (1 / k), den * (1 / k)
    r = RatFunc.__new__(RatFunc)
    r.num, r.den, r._hash = num, den, None
    return r
