"""Quaternion symbols, 2-torsion Brauer classes and their residues.

Classes are formal sums of symbols ``(a, b)`` with rational-function
entries.  Equality is syntactic after :func:`simplify`; zero-ness is only
claimed when a rewrite trace reaches the empty class, and nonzero-ness only
when some residue is certified nontrivial.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .fieldcore import GroundMode, MPoly, RatFunc, as_ratfunc
from .hilbert import ramified_places
from .valuation import (DivisorialValuation, ResidueField, SquareClass, is_square_ratfunc,
                        reduce_unit, split_prime_power, square_class_rep)


class EntryVanishesAtPoint(ValueError):
    pass


class Rule(Enum):
    BILINEARITY = "Bilinearity"
    SYMMETRY = "Symmetry"
    MINUS_SELF = "MinusSelf"
    ONE_MINUS_SELF = "OneMinusSelf"
    SQUARE_KILL = "SquareKill"
    NORM_RELATION = "NormRelation"
    CONSTANT_SQUARE = "ConstantSquare"


def _entry_key(f: RatFunc):
    return (f.num.total_degree() + f.den.total_degree(), str(f))


@dataclass(frozen=True)
class QuaternionSymbol:
    a: RatFunc
    b: RatFunc
    mode: GroundMode = GroundMode.EXACT

    def __post_init__(self):
        a, b = as_ratfunc(self.a), as_ratfunc(self.b)
        if a.variables != b.variables:
            raise ValueError("symbol entries over different variable lists")
        if a.is_zero() or b.is_zero():
            raise ValueError("quaternion symbol entries must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def of(cls, a, b, variables, mode=GroundMode.EXACT) -> QuaternionSymbol:
        return cls(_lift(a, variables), _lift(b, variables), mode)

    @property
    def variables(self) -> tuple:
        return self.a.variables

    def swapped(self) -> QuaternionSymbol:
        return QuaternionSymbol(self.b, self.a, self.mode)

    def key(self):
        return (_entry_key(self.a), _entry_key(self.b))

    def __str__(self):
        return f"({self.a}, {self.b})"


def _lift(value, variables) -> RatFunc:
    if isinstance(value, (int, Fraction)):
        return RatFunc.const(value, variables)
    return as_ratfunc(value, variables)


@dataclass(frozen=True)
class BrauerClass:
    """A formal sum of quaternion symbols (a multiset; cancellation happens in simplify)."""

    symbols: tuple
    variables: tuple
    mode: GroundMode = GroundMode.EXACT

    def __post_init__(self):
        syms = tuple(sorted(self.symbols, key=QuaternionSymbol.key))
        for s in syms:
            if s.variables != tuple(self.variables):
                raise ValueError("symbol over a different variable list")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "variables", tuple(self.variables))

    @classmethod
    def zero(cls, variables, mode=GroundMode.EXACT) -> BrauerClass:
        return cls((), variables, mode)

    @classmethod
    def of(cls, pairs: Iterable, variables, mode=GroundMode.EXACT) -> BrauerClass:
        return cls(tuple(QuaternionSymbol.of(a, b, variables, mode) for a, b in pairs), variables, mode)

    def is_empty(self) -> bool:
        return not self.symbols

    def __add__(self, other: BrauerClass) -> BrauerClass:
        return BrauerClass(self.symbols + other.symbols, self.variables, self.mode)

    def replace(self, removed: Sequence[QuaternionSymbol], added: Sequence[QuaternionSymbol]) -> BrauerClass:
        rest = list(self.symbols)
        for s in removed:
            rest.remove(s)
        return BrauerClass(tuple(rest) + tuple(added), self.variables, self.mode)

    def __str__(self):
        if not self.symbols:
            return "0"
        return " + ".join(str(s) for s in self.symbols)


@dataclass(frozen=True)
class RewriteStep:
    rule: Rule
    before: BrauerClass
    after: BrauerClass
    witness: Optional[tuple] = None   # (x0, y0) for NormRelation


@dataclass(frozen=True)
class RewriteTrace:
    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    def rules(self) -> list:
        return [s.rule for s in self.steps]


# single-rule validity -------------------------------------------------------

def _sq(f: RatFunc, mode: GroundMode) -> bool:
    return not f.is_zero() and is_square_ratfunc(f, mode)


def _diff(step: RewriteStep):
    b, a = Counter(step.before.symbols), Counter(step.after.symbols)
    return list((b - a).elements()), list((a - b).elements())


def _bilinear_ok(one: QuaternionSymbol, many: list) -> bool:
    if len(many) < 2:
        return False
    for shared_first in (True, False):
        shared = one.a if shared_first else one.b
        other = one.b if shared_first else one.a
        prod = RatFunc.const(1, one.variables)
        for s in many:
            if s.a == shared:
                prod = prod * s.b
            elif s.b == shared:
                prod = prod * s.a
            else:
                break
        else:
            if prod == other:
                return True
    return False


def check_step(step: RewriteStep) -> bool:
    """Whether ``step`` is one valid instance of its rule."""
    removed, added = _diff(step)
    mode = step.before.mode
    r = step.rule
    if r is Rule.SYMMETRY:
        return len(removed) == 1 and added == [removed[0].swapped()]
    if r is Rule.BILINEARITY:
        if len(removed) == 2 and not added:
            return removed[0] == removed[1]
        if len(removed) == 1:
            return _bilinear_ok(removed[0], added)
        if len(added) == 1:
            return _bilinear_ok(added[0], removed)
        return False
    if len(removed) != 1 or len(added) > 1:
        return False
    s = removed[0]
    if r is Rule.SQUARE_KILL:
        if not added:
            return _sq(s.a, GroundMode.EXACT) or _sq(s.b, GroundMode.EXACT)
        t = added[0]
        return _sq(s.a / t.a, GroundMode.EXACT) and _sq(s.b / t.b, GroundMode.EXACT)
    if r is Rule.CONSTANT_SQUARE:
        if mode is not GroundMode.CLOSED:
            return False
        if not added:
            return s.a.is_constant() or s.b.is_constant()
        t = added[0]
        return (s.a / t.a).is_constant() and (s.b / t.b).is_constant()
    if r is Rule.MINUS_SELF:
        if not added:
            return _sq(-s.a * s.b, mode)
        t = added[0]
        return _sq(s.a / s.b, mode) and (t == QuaternionSymbol(s.a, RatFunc.const(-1, s.variables), s.mode))
    if r is Rule.ONE_MINUS_SELF:
        return not added and any(
            not (1 - x).is_zero() and _sq(y * (1 - x), mode) for x, y in ((s.a, s.b), (s.b, s.a)))
    if r is Rule.NORM_RELATION:
        if added or step.witness is None:
            return False
        x0, y0 = step.witness
        for x, y in ((s.a, s.b), (s.b, s.a)):
            n = x0 * x0 - x * y0 * y0
            if not n.is_zero() and _sq(y / n, mode):
                return True
        return False
    return False


def replay(trace: RewriteTrace, start: BrauerClass | None = None) -> bool:
    """Every step valid and consecutive steps chained."""
    prev = start
    for step in trace.steps:
        if prev is not None and step.before != prev:
            return False
        if not check_step(step):
            return False
        prev = step.after
    return True


# simplification ---------------------------------------------------------------

class _Rewriter:
    def __init__(self, start: BrauerClass):
        self.cur = start
        self.steps: list = []

    def push(self, rule: Rule, removed, added, witness=None):
        new = self.cur.replace(removed, added)
        step = RewriteStep(rule, self.cur, new, witness)
        assert check_step(step), f"invalid {rule.value} step: {self.cur} -> {new}"
        self.steps.append(step)
        self.cur = new

    def trace(self) -> RewriteTrace:
        return RewriteTrace(tuple(self.steps))


def _exact_rep(f: RatFunc) -> RatFunc:
    return RatFunc(square_class_rep(f, GroundMode.EXACT))


def _rewrite_symbol(s: QuaternionSymbol, witnesses) -> Optional[tuple]:
    """First applicable local rule as (rule, added, witness), or None."""
    mode = s.mode
    one = RatFunc.const(1, s.variables)
    for x in (s.a, s.b):
        if _sq(x, GroundMode.EXACT):
            return Rule.SQUARE_KILL, [], None
    ra, rb = _exact_rep(s.a), _exact_rep(s.b)
    if (ra, rb) != (s.a, s.b):
        return Rule.SQUARE_KILL, [QuaternionSymbol(ra, rb, mode)], None
    if mode is GroundMode.CLOSED:
        if s.a.is_constant() or s.b.is_constant():
            return Rule.CONSTANT_SQUARE, [], None
        ca = RatFunc(square_class_rep(s.a, GroundMode.CLOSED))
        cb = RatFunc(square_class_rep(s.b, GroundMode.CLOSED))
        if (ca, cb) != (s.a, s.b):
            return Rule.CONSTANT_SQUARE, [QuaternionSymbol(ca, cb, mode)], None
    if _sq(-s.a * s.b, mode):
        return Rule.MINUS_SELF, [], None
    if s.a == s.b and s.a != -1:
        return Rule.MINUS_SELF, [QuaternionSymbol(s.a, -one, mode)], None
    for x, y in ((s.a, s.b), (s.b, s.a)):
        if not (1 - x).is_zero() and _sq(y * (1 - x), mode):
            return Rule.ONE_MINUS_SELF, [], None
    for wa, x0, y0 in witnesses:
        for x, y in ((s.a, s.b), (s.b, s.a)):
            if _sq(x / wa, GroundMode.EXACT) or x == wa:
                n = x0 * x0 - x * y0 * y0
                if not n.is_zero() and _sq(y / n, mode):
                    return Rule.NORM_RELATION, [], (x0, y0)
    if _entry_key(s.a) > _entry_key(s.b):
        return Rule.SYMMETRY, [s.swapped()], None
    return None


def simplify(c: BrauerClass, witnesses: Sequence = ()) -> tuple:
    """Rewrite to a canonical fixpoint; returns (class, trace).

    ``witnesses`` is a sequence of ``(a, x0, y0)`` enabling the norm
    relation ``(a, x0^2 - a*y0^2) = 0``.
    """
    wit = [tuple(_lift(t, c.variables) for t in w) for w in witnesses]
    rw = _Rewriter(c)
    while True:
        changed = False
        for s in rw.cur.symbols:
            hit = _rewrite_symbol(s, wit)
            if hit is not None:
                rule, added, witness = hit
                rw.push(rule, [s], added, witness)
                changed = True
                break
        if changed:
            continue
        counts = Counter(rw.cur.symbols)
        dup = next((s for s, k in counts.items() if k >= 2), None)
        if dup is not None:
            rw.push(Rule.BILINEARITY, [dup, dup], [])
            continue
        return rw.cur, rw.trace()


# residues -------------------------------------------------------------------

def _as_valuation_mode(v: DivisorialValuation, mode: GroundMode) -> DivisorialValuation:
    return v if v.mode is mode else DivisorialValuation(v.prime, v.main_var, mode)


def residue(s: QuaternionSymbol, v: DivisorialValuation) -> SquareClass:
    """(-1)^(v(a) v(b)) * a^v(b) / b^v(a), reduced to the residue field."""
    m, _ = split_prime_power(s.a, v)
    n, _ = split_prime_power(s.b, v)
    q = s.a ** n / s.b ** m
    if (m * n) % 2:
        q = -q
    return SquareClass.of(reduce_unit(q, v))


def residue_class(c: BrauerClass, v: DivisorialValuation) -> SquareClass:
    out = SquareClass.trivial(v.residue_field)
    for s in c.symbols:
        out = out * residue(s, v)
    return out


def same_class(x: SquareClass, y: SquareClass) -> Optional[bool]:
    """Whether two square classes agree (None if undecidable)."""
    return SquareClass.of(x.element * y.element.inverse()).triviality


def restrict_residue(rho: SquareClass, e: int) -> SquareClass:
    """Multiply by the ramification index e in the 2-torsion group kappa*/kappa*^2."""
    if e < 1:
        raise ValueError("ramification index must be positive")
    if e % 2:
        return rho
    return SquareClass.trivial(rho.element.field)


# evaluation and pairing -------------------------------------------------------

def _eval_entry(f: RatFunc, point: Mapping[str, object]) -> Fraction:
    n = f.num.evaluate(point)
    d = f.den.evaluate(point)
    if n == 0 or d == 0:
        raise EntryVanishesAtPoint(f"entry {f} is not a unit at {dict(point)}")
    return n / d


def reduce_ground_class(c: BrauerClass) -> BrauerClass:
    """Canonical form of a class with constant entries."""
    if c.mode is GroundMode.CLOSED:
        return BrauerClass.zero(c.variables, c.mode)
    pairs = [(s.a.constant_value(), s.b.constant_value()) for s in c.symbols]
    if not ramified_places(pairs):
        return BrauerClass.zero(c.variables, c.mode)
    simplified, _ = simplify(c)
    kept = [s for s in simplified.symbols
            if ramified_places([(s.a.constant_value(), s.b.constant_value())])]
    return BrauerClass(tuple(kept), c.variables, c.mode)


def ground_class_is_zero(c: BrauerClass) -> bool:
    if c.mode is GroundMode.CLOSED:
        return True
    return not ramified_places([(s.a.constant_value(), s.b.constant_value()) for s in c.symbols])


def evaluate_at_point(c: BrauerClass, point: Mapping[str, object]) -> BrauerClass:
    syms = []
    for s in c.symbols:
        a, b = _eval_entry(s.a, point), _eval_entry(s.b, point)
        syms.append(QuaternionSymbol.of(a, b, c.variables, c.mode))
    return reduce_ground_class(BrauerClass(tuple(syms), c.variables, c.mode))


def pair_with_zero_cycle(c: BrauerClass, cycle: Iterable) -> BrauerClass:
    """Pair with sum(n_i * P_i) over rational points; ``cycle`` yields (n_i, P_i)."""
    total = BrauerClass.zero(c.variables, c.mode)
    for n, point in cycle:
        ev = evaluate_at_point(c, point)
        if n % 2:
            total = total + ev
    return reduce_ground_class(total)


# decomposition at a valuation ------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    unramified: BrauerClass
    ramified: Optional[QuaternionSymbol]
    trace: RewriteTrace
    checks: dict = field(default_factory=dict)


def decompose_at(s: QuaternionSymbol, v: DivisorialValuation) -> Decomposition:
    """Rewrite (a, b) as (unramified part) + (-prime, t) with t a unit at v."""
    mode = s.mode
    vars_ = s.variables
    v = _as_valuation_mode(v, mode)
    pi = RatFunc(v.prime)
    one = RatFunc.const(1, vars_)
    minus_one = -one
    start = BrauerClass((s,), vars_, mode)
    rw = _Rewriter(start)

    a, b = _exact_rep(s.a), _exact_rep(s.b)
    cur = s
    if (a, b) != (s.a, s.b):
        cur = QuaternionSymbol(a, b, mode)
        rw.push(Rule.SQUARE_KILL, [s], [cur])
    m, u = split_prime_power(a, v)
    n, w = split_prime_power(b, v)
    pending = [cur]
    if n:
        parts = [QuaternionSymbol(a, pi, mode)] + ([QuaternionSymbol(a, w, mode)] if w != 1 else [])
        if len(parts) > 1:
            rw.push(Rule.BILINEARITY, [cur], parts)
        pending = parts
    if m:
        for sym in pending:
            parts = [QuaternionSymbol(pi, sym.b, mode)] + ([QuaternionSymbol(u, sym.b, mode)] if u != 1 else [])
            if len(parts) > 1:
                rw.push(Rule.BILINEARITY, [sym], parts)

    pp = QuaternionSymbol(pi, pi, mode)
    if pp in rw.cur.symbols:
        rw.push(Rule.MINUS_SELF, [pp], [QuaternionSymbol(pi, minus_one, mode)])
    for sym in list(rw.cur.symbols):
        if sym.b == pi and sym.a != pi:
            rw.push(Rule.SYMMETRY, [sym], [sym.swapped()])
    for sym in list(rw.cur.symbols):
        if sym.a == 1 or sym.b == 1:
            rw.push(Rule.SQUARE_KILL, [sym], [])
    with_pi = [sym for sym in rw.cur.symbols if sym.a == pi]
    while len(with_pi) > 1:
        x, y = with_pi[0], with_pi[1]
        merged = QuaternionSymbol(pi, x.b * y.b, mode)
        rw.push(Rule.BILINEARITY, [x, y], [merged])
        if merged.b == 1:
            rw.push(Rule.SQUARE_KILL, [merged], [])
            with_pi = with_pi[2:]
        else:
            with_pi = [merged] + with_pi[2:]

    ramified = None
    if with_pi:
        t = with_pi[0].b
        neg_pi = QuaternionSymbol(-pi, t, mode)
        rw.push(Rule.BILINEARITY, [with_pi[0]], [neg_pi, QuaternionSymbol(minus_one, t, mode)])
        rt = _exact_rep(t)
        if rt != t:
            for sym in (neg_pi, QuaternionSymbol(minus_one, t, mode)):
                if rt == 1:
                    rw.push(Rule.SQUARE_KILL, [sym], [])
                else:
                    rw.push(Rule.SQUARE_KILL, [sym], [QuaternionSymbol(sym.a, rt, mode)])
            neg_pi = QuaternionSymbol(-pi, rt, mode)
        if rt != 1:
            ramified = neg_pi

    rest = list(rw.cur.symbols)
    if ramified is not None:
        rest.remove(ramified)
    unram, sub = simplify(BrauerClass(tuple(rest), vars_, mode))
    extra = (ramified,) if ramified is not None else ()
    for st in sub.steps:
        rw.steps.append(RewriteStep(st.rule, BrauerClass(st.before.symbols + extra, vars_, mode),
                                    BrauerClass(st.after.symbols + extra, vars_, mode), st.witness))
    rw.cur = BrauerClass(unram.symbols + extra, vars_, mode)

    checks = {"unramified_residue_trivial": residue_class(unram, v).triviality}
    target = residue(s, v)
    if ramified is None:
        checks["ramified_matches"] = target.triviality
    else:
        checks["ramified_matches"] = same_class(residue(ramified, v), target)
    return Decomposition(unram, ramified, rw.trace(), checks)


def function_field(variables, mode: GroundMode) -> ResidueField:
    return ResidueField.function_field(variables, mode)
