"""Gcd, squarefree decomposition and exact square roots for MPoly."""
from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd, lcm as ilcm

from .ground import GroundMode, is_square_constant, rational_sqrt, squarefree_kernel
from .mpoly import MPoly, grlex_key


class ZeroPolynomialError(ValueError):
    pass


def rational_content(p: MPoly) -> Fraction:
    """The rational c with p = c * normalize(p); zero for the zero polynomial."""
    if p.is_zero():
        return Fraction(0)
    den = 1
    for c in p.terms.values():
        den = ilcm(den, c.denominator)
    num = 0
    for c in p.terms.values():
        num = igcd(num, (c * den).numerator)
    content = Fraction(num, den)
    if p.leading_coefficient() < 0:
        content = -content
    return content


def normalize(p: MPoly) -> MPoly:
    """Primitive integer-coefficient associate with positive grlex leading coefficient."""
    if p.is_zero():
        return p
    c = rational_content(p)
    if c == 1:
        return p
    return p * (1 / c)


def content_in(p: MPoly, var: str) -> MPoly:
    g = MPoly.zero(p.variables)
    for c in p.coeffs_in(var).values():
        g = gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return g
    return g


def pseudo_remainder(a: MPoly, b: MPoly, var: str) -> MPoly:
    """lc(b)^k * a reduced modulo b as polynomials in var."""
    db = b.degree_in(var)
    lcb = b.lead_coeff_in(var)
    x = MPoly.var(var, a.variables)
    r = a
    while not r.is_zero() and r.degree_in(var) >= db:
        dr = r.degree_in(var)
        r = lcb * r - r.lead_coeff_in(var) * x ** (dr - db) * b
    return r


def _primitive_in(p: MPoly, var: str) -> MPoly:
    return normalize(p.exact_div(content_in(p, var)))


def gcd(p: MPoly, q: MPoly) -> MPoly:
    """Normalized gcd by content / primitive-part recursion; gcd(0, 0) = 0."""
    if p.variables != q.variables:
        raise ValueError("gcd of polynomials over different variable lists")
    if p.is_zero():
        return normalize(q)
    if q.is_zero():
        return normalize(p)
    one = MPoly.const(1, p.variables)
    if p.is_constant() or q.is_constant():
        return one
    if len(p.terms) == 1 or len(q.terms) == 1:
        # a monomial's divisors are monomials: take the least exponents
        exps = [min(k) for k in zip(*(list(p.terms) + list(q.terms)))]
        return MPoly._raw(p.variables, {tuple(exps): Fraction(1)})
    if len(p.terms) <= len(q.terms) and q.try_div(p) is not None:
        return normalize(p)
    if len(q.terms) <= len(p.terms) and p.try_div(q) is not None:
        return normalize(q)
    used_p, used_q = set(p.used_variables()), set(q.used_variables())
    var = next(v for v in p.variables if v in used_p or v in used_q)
    if var not in used_q:
        return gcd(content_in(p, var), q)
    if var not in used_p:
        return gcd(p, content_in(q, var))
    cp, cq = content_in(p, var), content_in(q, var)
    c = gcd(cp, cq)
    a, b = normalize(p.exact_div(cp)), normalize(q.exact_div(cq))
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    while not b.is_zero():
        if b.degree_in(var) == 0:
            a = one
            break
        r = pseudo_remainder(a, b, var)
        a, b = b, (_primitive_in(r, var) if not r.is_zero() else r)
    return normalize(c * _primitive_in(a, var))


def squarefree_decomposition(p: MPoly, main_var: str | None = None):
    """Return (content, [(factor, multiplicity), ...]).

    ``p == content * prod(f**m)``; factors are normalized, squarefree,
    pairwise coprime, listed with strictly increasing multiplicity.  Factors
    involving ``main_var`` are separated by Yun's algorithm in that variable;
    the content with respect to it is decomposed recursively in the other
    variables.
    """
    if p.is_zero():
        raise ZeroPolynomialError("squarefree decomposition of zero")
    order = list(p.variables)
    if main_var is not None:
        order.remove(main_var)
        order.insert(0, main_var)
    acc: dict[int, MPoly] = {}
    _sqf(normalize(p), order, acc)
    factors = [(normalize(f), m) for m, f in sorted(acc.items()) if not f.is_constant()]
    rest = p
    for f, m in factors:
        rest = rest.exact_div(f ** m)
    return rest.constant_value(), factors


def _sqf(q: MPoly, order: list, acc: dict) -> None:
    used = set(q.used_variables())
    for i, var in enumerate(order):
        if var in used:
            break
    else:
        return
    c = content_in(q, var)
    f = q.exact_div(c)
    for factor, m in _yun(f, var):
        acc[m] = acc[m] * factor if m in acc else factor
    _sqf(c, order[i + 1:], acc)


def _yun(f: MPoly, var: str):
    fp = f.diff(var)
    a0 = gcd(f, fp)
    b = f.exact_div(a0)
    c = fp.exact_div(a0)
    d = c - b.diff(var)
    i = 1
    out = []
    while b.degree_in(var) > 0:
        a = gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.diff(var)
        i += 1
    return out


def squarefree_part(p: MPoly, mode: GroundMode = GroundMode.EXACT) -> MPoly:
    """Canonical representative of the square class of the nonzero ``p``.

    Product of the odd-multiplicity factors times the signed squarefree
    kernel of the content (EXACT) or times 1 (CLOSED).
    """
    content, factors = squarefree_decomposition(p)
    out = MPoly.const(1 if mode is GroundMode.CLOSED else squarefree_kernel(content), p.variables)
    for f, m in factors:
        if m % 2:
            out = out * f
    return out


def is_square_poly(p: MPoly, mode: GroundMode = GroundMode.EXACT) -> bool:
    """Whether the nonzero polynomial is a square in the ground field's function field."""
    if p.is_zero():
        raise ZeroPolynomialError("square test of zero")
    lc = p.leading_coefficient()
    if not is_square_constant(lc, mode):
        return False
    return polynomial_square_root(p * (1 / lc)) is not None


def polynomial_square_root(p: MPoly) -> MPoly | None:
    """Exact square root with positive leading coefficient, or None if p is not a square.

    Terms of the root are peeled off in decreasing grlex order: once the
    leading part ``r`` of the root is known, the leading term of ``p - r**2``
    is twice the product of lt(r) with the next root term.
    """
    if p.is_zero():
        return p
    vars_ = p.variables
    le = p.leading_exponent()
    if any(k % 2 for k in le):
        return None
    c = rational_sqrt(p.terms[le])
    if c is None:
        return None
    lead_e = tuple(k // 2 for k in le)
    root = MPoly._raw(vars_, {lead_e: c})
    two_lt = 2 * c
    last = lead_e
    rem = p - root * root
    while not rem.is_zero():
        e = rem.leading_exponent()
        d = tuple(a - b for a, b in zip(e, lead_e))
        if any(k < 0 for k in d) or grlex_key(d) >= grlex_key(last):
            return None
        term = MPoly._raw(vars_, {d: rem.terms[e] / two_lt})
        rem = rem - term * (2 * root + term)
        root = root + term
        last = d
    return root
