"""Divisorial valuations on rational function fields and their residue fields.

A valuation is attached to an (asserted irreducible) prime polynomial.  The
residue field is modelled concretely when the prime is linear in its main
variable (a purely transcendental field in the remaining variables) or
quadratic in it (a quadratic extension of such a field); anything else is
``ABSTRACT`` and square questions about it come back as ``None``.

Squareness answers are tri-state: ``True``, ``False`` or ``None`` (unknown).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional

from .fieldcore import (GroundMode, MPoly, RatFunc, as_ratfunc, is_square_poly,
                        normalize, polynomial_square_root, squarefree_part, substitute)


class ZeroInput(ValueError):
    pass


class NotAUnit(ValueError):
    pass


class FieldKind(Enum):
    GROUND = "Ground"
    TRANSCENDENTAL = "SimpleTranscendental"
    QUADRATIC = "QuadraticExtension"
    ABSTRACT = "Abstract"


# squares in the function field ground(vars) -------------------------------

def is_square_ratfunc(f: RatFunc, mode: GroundMode) -> bool:
    if f.is_zero():
        raise ZeroInput("square test of zero")
    return is_square_poly(f.num * f.den, mode)


def sqrt_ratfunc(f: RatFunc) -> Optional[RatFunc]:
    """Exact square root over the rationals, or None."""
    if f.is_zero():
        return f
    rn = polynomial_square_root(f.num)
    rd = polynomial_square_root(f.den)
    if rn is None or rd is None:
        return None
    return RatFunc(rn, rd)


def square_class_rep(f: RatFunc, mode: GroundMode) -> MPoly:
    """Canonical polynomial in the square class of the nonzero f."""
    if f.is_zero():
        raise ZeroInput("zero has no square class")
    return squarefree_part(f.num * f.den, mode)


# valuations ---------------------------------------------------------------

@dataclass(frozen=True)
class DivisorialValuation:
    """The valuation of ground(variables) attached to ``prime``.

    Irreducibility of ``prime`` is the caller's obligation and is not checked.
    """

    prime: MPoly
    main_var: Optional[str] = None
    mode: GroundMode = GroundMode.EXACT

    def __post_init__(self):
        p = normalize(self.prime)
        if p.is_constant():
            raise ValueError("a divisorial valuation needs a nonconstant prime")
        main = self.main_var
        if main is None:
            main = next(v for v in p.variables if p.degree_in(v) > 0)
        elif p.degree_in(main) < 1:
            raise ValueError(f"prime {p} has degree 0 in {main!r}")
        object.__setattr__(self, "prime", p)
        object.__setattr__(self, "main_var", main)

    @property
    def variables(self) -> tuple:
        return self.prime.variables

    @cached_property
    def residue_field(self) -> ResidueField:
        return ResidueField.of_prime(self.prime, self.main_var, self.mode)

    def __str__(self):
        return f"v[{self.prime}]"


def _multiplicity(p: MPoly, prime: MPoly) -> tuple:
    m = 0
    while True:
        q = p.try_div(prime)
        if q is None:
            return m, p
        p, m = q, m + 1


def split_prime_power(f, v: DivisorialValuation) -> tuple:
    """Write f = prime**m * u with u a unit; returns (m, u)."""
    f = as_ratfunc(f, v.variables)
    if f.is_zero():
        raise ZeroInput("valuation of zero")
    mn, num = _multiplicity(f.num, v.prime)
    md, den = _multiplicity(f.den, v.prime)
    return mn - md, RatFunc(num, den)


def valuation_of(f, v: DivisorialValuation) -> int:
    return split_prime_power(f, v)[0]


# residue fields -----------------------------------------------------------

@dataclass(frozen=True)
class ResidueField:
    kind: FieldKind
    variables: tuple
    mode: GroundMode
    defining_prime: Optional[MPoly] = None
    main_var: Optional[str] = None
    residual_vars: tuple = ()
    # prime = A*t^2 + B*t + C in the main variable (QUADRATIC only)
    quad: Optional[tuple] = None

    @classmethod
    def function_field(cls, variables, mode: GroundMode) -> ResidueField:
        """The field ground(variables) itself."""
        variables = tuple(variables)
        kind = FieldKind.TRANSCENDENTAL if variables else FieldKind.GROUND
        return cls(kind, variables, mode, residual_vars=variables)

    @classmethod
    def of_prime(cls, prime: MPoly, main_var: str, mode: GroundMode) -> ResidueField:
        variables = prime.variables
        others = tuple(v for v in variables if v != main_var)
        deg = prime.degree_in(main_var)
        if deg == 1:
            kind = FieldKind.TRANSCENDENTAL if others else FieldKind.GROUND
            return cls(kind, variables, mode, prime, main_var, others)
        if deg == 2:
            coeffs = prime.coeffs_in(main_var)
            zero = MPoly.zero(variables)
            a, b, c = (RatFunc(coeffs.get(k, zero)) for k in (2, 1, 0))
            disc = b * b - 4 * a * c
            if disc.is_zero() or is_square_ratfunc(disc, mode):
                return cls(FieldKind.ABSTRACT, variables, mode, prime, main_var, others)
            return cls(FieldKind.QUADRATIC, variables, mode, prime, main_var, others, (a, b, c))
        return cls(FieldKind.ABSTRACT, variables, mode, prime, main_var, others)

    @property
    def discriminant(self) -> Optional[RatFunc]:
        """d with residue field = ground(base)(sqrt(d)) (QUADRATIC only)."""
        if self.quad is None:
            return None
        a, b, c = self.quad
        return b * b - 4 * a * c

    def one(self) -> ResidueElement:
        one = RatFunc.const(1, self.variables)
        if self.kind is FieldKind.QUADRATIC:
            return ResidueElement(self, (one, RatFunc.const(0, self.variables)))
        return ResidueElement(self, (one,))

    def _reduce_poly(self, p: MPoly):
        if self.kind in (FieldKind.GROUND, FieldKind.TRANSCENDENTAL):
            if self.defining_prime is None:
                return (RatFunc(p),)
            coeffs = self.defining_prime.coeffs_in(self.main_var)
            root = -RatFunc(coeffs.get(0, MPoly.zero(self.variables))) / RatFunc(coeffs[1])
            return (substitute(p, {self.main_var: root}),)
        a, b, c = self.quad
        coeffs = p.coeffs_in(self.main_var)
        zero = RatFunc.const(0, self.variables)
        top = max(coeffs) if coeffs else 0
        cs = [RatFunc(coeffs[k]) if k in coeffs else zero for k in range(max(top, 1) + 1)]
        for k in range(len(cs) - 1, 1, -1):
            ck = cs[k]
            if ck.is_zero():
                continue
            # t^k = t^(k-2) * t^2 and t^2 = -(B t + C)/A
            cs[k - 1] = cs[k - 1] - ck * b / a
            cs[k - 2] = cs[k - 2] - ck * c / a
        return (cs[0], cs[1])

    def reduce(self, unit: RatFunc) -> ResidueElement:
        if self.kind is FieldKind.ABSTRACT:
            return ResidueElement(self, (unit,))
        num = ResidueElement(self, self._reduce_poly(unit.num))
        den = ResidueElement(self, self._reduce_poly(unit.den))
        if den.is_zero():
            raise NotAUnit(f"{unit} is not a unit at {self.defining_prime}")
        return num * den.inverse()

    def __str__(self):
        if self.kind is FieldKind.GROUND:
            return "ground"
        if self.kind is FieldKind.TRANSCENDENTAL:
            return f"ground({', '.join(self.residual_vars)})"
        if self.kind is FieldKind.QUADRATIC:
            return f"ground({', '.join(self.residual_vars)})(sqrt({self.discriminant}))"
        return f"Frac(ring/({self.defining_prime}))"


@dataclass(frozen=True)
class ResidueElement:
    """An element of a residue field.

    ``coords`` is ``(value,)`` for ground / transcendental fields (a rational
    function free of the main variable), ``(s, w)`` meaning ``s + w*t`` for a
    quadratic extension generated by the class ``t`` of the main variable,
    and ``(unit,)`` (unreduced) for abstract fields.
    """

    field: ResidueField
    coords: tuple

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def is_one(self) -> bool:
        if self.field.kind is FieldKind.QUADRATIC:
            return self.coords[0] == 1 and self.coords[1].is_zero()
        return self.coords[0] == 1

    def __mul__(self, other: ResidueElement) -> ResidueElement:
        if other.field != self.field:
            raise ValueError("residue elements from different fields")
        if self.field.kind is FieldKind.QUADRATIC:
            a, b, c = self.field.quad
            (s1, w1), (s2, w2) = self.coords, other.coords
            ww = w1 * w2
            return ResidueElement(self.field, (s1 * s2 - ww * c / a, s1 * w2 + s2 * w1 - ww * b / a))
        return ResidueElement(self.field, (self.coords[0] * other.coords[0],))

    def norm(self) -> RatFunc:
        a, b, c = self.field.quad
        s, w = self.coords
        return s * s - s * w * b / a + w * w * c / a

    def inverse(self) -> ResidueElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero residue element")
        if self.field.kind is FieldKind.QUADRATIC:
            a, b, _ = self.field.quad
            s, w = self.coords
            n = self.norm()
            return ResidueElement(self.field, ((s - w * b / a) / n, -w / n))
        return ResidueElement(self.field, (self.coords[0].inverse(),))

    def __pow__(self, k: int) -> ResidueElement:
        if k < 0:
            return self.inverse() ** -k
        out = self.field.one()
        for _ in range(k):
            out = out * self
        return out

    def as_ratfunc(self) -> RatFunc:
        if self.field.kind is FieldKind.QUADRATIC:
            s, w = self.coords
            return s + w * RatFunc.var(self.field.main_var, self.field.variables)
        return self.coords[0]

    def __str__(self):
        if self.field.kind is FieldKind.ABSTRACT:
            return f"[{self.coords[0]}]"
        return str(self.as_ratfunc())


def reduce_unit(f, v: DivisorialValuation) -> ResidueElement:
    m, u = split_prime_power(f, v)
    if m != 0:
        raise NotAUnit(f"{f} has valuation {m} at {v.prime}")
    return v.residue_field.reduce(u)


def is_square_in_residue_field(e: ResidueElement) -> Optional[bool]:
    if e.is_zero():
        raise ZeroInput("square test of the zero residue element")
    if e.is_one():
        return True
    k = e.field.kind
    mode = e.field.mode
    if k in (FieldKind.GROUND, FieldKind.TRANSCENDENTAL):
        return is_square_ratfunc(e.coords[0], mode)
    if k is FieldKind.ABSTRACT:
        return None
    a, b, _ = e.field.quad
    s, w = e.coords
    dd = e.field.discriminant / (4 * a * a)      # theta^2 with theta = t + B/(2A)
    s = s - w * b / (2 * a)
    if w.is_zero():
        return is_square_ratfunc(s, mode) or is_square_ratfunc(s / dd, mode)
    n2 = s * s - dd * w * w
    if not is_square_ratfunc(n2, mode):
        return False
    n = sqrt_ratfunc(n2)
    if n is None:
        # square only over the closure of the ground field; no exact root to test with
        return None
    return any(not h.is_zero() and is_square_ratfunc(h, mode) for h in ((s + n) / 2, (s - n) / 2))


def is_square_in_completion(f, v: DivisorialValuation) -> Optional[bool]:
    m, u = split_prime_power(f, v)
    if m % 2:
        return False
    return is_square_in_residue_field(v.residue_field.reduce(u))


@dataclass(frozen=True)
class SquareClass:
    """A class in kappa*/kappa*^2 together with its cached triviality."""

    element: ResidueElement
    triviality: Optional[bool] = field(default=None)

    @classmethod
    def of(cls, element: ResidueElement) -> SquareClass:
        return cls(element, is_square_in_residue_field(element))

    @classmethod
    def trivial(cls, fld: ResidueField) -> SquareClass:
        return cls(fld.one(), True)

    def __mul__(self, other: SquareClass) -> SquareClass:
        return SquareClass.of(self.element * other.element)

    @property
    def representative(self) -> str:
        e = self.element
        if e.field.kind in (FieldKind.GROUND, FieldKind.TRANSCENDENTAL):
            return str(square_class_rep(e.coords[0], e.field.mode))
        return str(e)

    def __str__(self):
        t = {True: "true", False: "false", None: "unknown"}[self.triviality]
        return f"class: {self.representative}, trivial: {t}"
