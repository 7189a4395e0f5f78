"""Sparse multivariate polynomials over the rationals.

Terms are kept in a dict mapping exponent tuples to nonzero ``Fraction``
coefficients.  The canonical term order is graded lexicographic with the
variables ranked in the order they were declared.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ground import as_fraction

Exponent = tuple


def grlex_key(e: Exponent):
    return (sum(e), e)


class MPoly:
    """An immutable polynomial in a fixed, ordered list of variables."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        clean = {}
        n = len(variables)
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n or any(k < 0 for k in e):
                raise ValueError(f"bad exponent vector {e} for variables {variables}")
            c = as_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.variables = variables
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> MPoly:
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> MPoly:
        return cls._raw(tuple(variables), {})

    @classmethod
    def const(cls, c, variables: Sequence[str]) -> MPoly:
        variables = tuple(variables)
        c = as_fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> MPoly:
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"{name!r} not among {variables}")
        return cls._raw(variables, {e: Fraction(1)})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], variables: Sequence[str], coeff=1) -> MPoly:
        variables = tuple(variables)
        e = tuple(exps.get(v, 0) for v in variables)
        return cls(variables, {e: coeff})

    # basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise ValueError(f"{var!r} not among {self.variables}") from None

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        i = self.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def used_variables(self) -> tuple:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def leading_exponent(self) -> Exponent:
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[self.leading_exponent()]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # coercion -----------------------------------------------------------

    def _coerce(self, other) -> MPoly | None:
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                raise ValueError(f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.variables)
        return None

    def with_variables(self, variables: Sequence[str]) -> MPoly:
        """Re-embed into a variable list containing every variable in use."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = []
        for i, v in enumerate(self.variables):
            if v in variables:
                pos.append(variables.index(v))
            else:
                pos.append(None)
        terms = {}
        n = len(variables)
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.variables[i]!r} in use, missing from {variables}")
                    new[pos[i]] = k
            terms[tuple(new)] = c
        return MPoly._raw(variables, terms)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly.zero(self.variables)
            return MPoly._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return MPoly._raw(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = MPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero constant")
            return self * (Fraction(1) / other)
        from .ratfunc import RatFunc
        return RatFunc(self) / other

    def __rtruediv__(self, other):
        from .ratfunc import RatFunc
        return RatFunc(MPoly.const(other, self.variables)) / self

    def exact_div(self, other) -> MPoly:
        q = self.try_div(other)
        if q is None:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def try_div(self, other) -> MPoly | None:
        """Quotient ``self / other`` if the division is exact, else None."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le = other.leading_exponent()
        lc = other.terms[le]
        if len(other.terms) == 1:
            terms = {}
            for e, c in self.terms.items():
                d = tuple(a - b for a, b in zip(e, le))
                if any(k < 0 for k in d):
                    return None
                terms[d] = c / lc
            return MPoly._raw(self.variables, terms)
        rem = dict(self.terms)
        quot = {}
        other_terms = list(other.terms.items())
        while rem:
            e = max(rem, key=grlex_key)
            d = tuple(a - b for a, b in zip(e, le))
            if any(k < 0 for k in d):
                return None
            coef = rem[e] / lc
            quot[d] = coef
            for qe, qc in other_terms:
                t = tuple(a + b for a, b in zip(d, qe))
                s = rem.get(t, 0) - coef * qc
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MPoly._raw(self.variables, quot)

    def divides(self, other) -> bool:
        return other.try_div(self) is not None

    # structure in one variable ------------------------------------------

    def coeffs_in(self, var: str) -> dict:
        """Map k -> coefficient of ``var**k`` (an MPoly free of ``var``)."""
        i = self.index(var)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: MPoly._raw(self.variables, t) for k, t in out.items()}

    def lead_coeff_in(self, var: str) -> MPoly:
        d = self.degree_in(var)
        return self.coeffs_in(var).get(d, MPoly.zero(self.variables))

    def diff(self, var: str) -> MPoly:
        i = self.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                terms[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MPoly._raw(self.variables, terms)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Value at a full rational point."""
        missing = [v for v in self.used_variables() if v not in point]
        if missing:
            raise ValueError(f"no value for {missing}")
        vals = [as_fraction(point.get(v, 0)) for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def subs_constants(self, point: Mapping[str, object]) -> MPoly:
        """Substitute rational constants for some variables."""
        idx = {self.index(v): as_fraction(val) for v, val in point.items()}
        terms: dict = {}
        for e, c in self.terms.items():
            new = list(e)
            for i, val in idx.items():
                if e[i]:
                    c = c * val ** e[i]
                    new[i] = 0
            if c:
                t = tuple(new)
                s = terms.get(t, 0) + c
                if s:
                    terms[t] = s
                else:
                    del terms[t]
        return MPoly._raw(self.variables, terms)

    def rename(self, mapping: Mapping[str, str]) -> MPoly:
        """Permute variable roles: variable v is replaced by mapping[v]."""
        target = [self.index(mapping.get(v, v)) for v in self.variables]
        terms = {}
        n = len(self.variables)
        for e, c in self.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                new[target[i]] += k
            terms[tuple(new)] = c
        return MPoly._raw(self.variables, terms)

    # comparison / printing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MPoly):
            return self.variables == other.variables and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MPoly({str(self)!r}, {list(self.variables)})"


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: MPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(p.variables, e) if k)
        if not mono:
            s = _format_coeff(c)
        elif c == 1:
            s = mono
        elif c == -1:
            s = "-" + mono
        else:
            s = f"{_format_coeff(c)}*{mono}"
        if parts and not s.startswith("-"):
            s = "+" + s
        parts.append(s)
    return "".join(parts)


def product(polys: Iterable[MPoly], variables: Sequence[str]) -> MPoly:
    out = MPoly.const(1, variables)
    for p in polys:
        out = out * p
    return out
