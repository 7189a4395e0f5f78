"""Quadric surfaces and conics over a discrete valuation ring.

A form is brought to a canonical diagonal shape by diagonal moves only:
stripping even powers of the uniformizer from entries, scaling the whole
form, and permuting entries.  The number of entries of odd valuation then
decides the case.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .brauer import (BrauerClass, QuaternionSymbol, Rule, RewriteStep, RewriteTrace, replay,
                     simplify)
from .certificate import CertificateStep, Check
from .fieldcore import GroundMode, MPoly, RatFunc, parse_ratfunc
from .quadrics import DiagonalForm
from .valuation import (DivisorialValuation, SquareClass, is_square_in_residue_field, reduce_unit,
                        split_prime_power)


class IdentityFails(AssertionError):
    pass


@dataclass(frozen=True)
class DvrContext:
    valuation: DivisorialValuation

    @classmethod
    def of(cls, prime: MPoly, main_var: Optional[str] = None, mode=GroundMode.EXACT) -> DvrContext:
        return cls(DivisorialValuation(prime, main_var, mode))

    @property
    def mode(self) -> GroundMode:
        return self.valuation.mode

    @property
    def uniformizer(self) -> RatFunc:
        return RatFunc(self.valuation.prime)

    def order(self, f: RatFunc) -> int:
        return split_prime_power(f, self.valuation)[0]


@dataclass(frozen=True)
class Move:
    kind: str                       # "strip" | "scale" | "permute"
    index: Optional[int] = None
    factor: Optional[RatFunc] = None
    perm: Optional[tuple] = None

    def __str__(self):
        if self.kind == "strip":
            return f"entry {self.index} / ({self.factor})"
        if self.kind == "scale":
            return f"form * ({self.factor})"
        return f"permute {list(self.perm)}"


def apply_moves(entries, moves) -> tuple:
    cur = list(entries)
    for m in moves:
        if m.kind == "strip":
            cur[m.index] = cur[m.index] / m.factor
        elif m.kind == "scale":
            cur = [e * m.factor for e in cur]
        elif m.kind == "permute":
            cur = [cur[i] for i in m.perm]
        else:
            raise ValueError(f"unknown move {m.kind!r}")
    return tuple(cur)


def _strip(cur: list, ctx: DvrContext, moves: list) -> None:
    for i, e in enumerate(cur):
        k = ctx.order(e) // 2
        if k:
            factor = ctx.uniformizer ** (2 * k)
            cur[i] = e / factor
            moves.append(Move("strip", i, factor))


def _normalize(form: DiagonalForm, ctx: DvrContext) -> tuple:
    """(normalized entries, parities, moves)."""
    cur = list(form.entries)
    moves: list = []
    _strip(cur, ctx, moves)
    if 2 * sum(ctx.order(e) for e in cur) > len(cur):
        pi = ctx.uniformizer
        moves.append(Move("scale", factor=pi))
        cur = [e * pi for e in cur]
        _strip(cur, ctx, moves)
    parity = [ctx.order(e) for e in cur]
    j = parity.index(0)
    if cur[j] != 1:
        inv = cur[j].inverse()
        moves.append(Move("scale", factor=inv))
        cur = [e * inv for e in cur]
    perm = tuple(sorted(range(len(cur)), key=lambda i: parity[i]))
    if perm != tuple(range(len(cur))):
        moves.append(Move("permute", perm=perm))
        cur = [cur[i] for i in perm]
        parity = [parity[i] for i in perm]
    return tuple(cur), parity, tuple(moves)


@dataclass(frozen=True)
class QuadricModelCase:
    tag: str                      # "I" | "II" | "III"
    a: RatFunc
    b: RatFunc
    d: Optional[RatFunc]
    uniformizer: Optional[RatFunc]
    normalized_entries: DiagonalForm
    scaling_trace: tuple


@dataclass(frozen=True)
class ConicModelCase:
    tag: str                      # "I" | "II"
    a: RatFunc
    b: Optional[RatFunc]
    uniformizer: Optional[RatFunc]
    normalized: DiagonalForm
    scaling_trace: tuple
    a_residue_square: Optional[bool] = None


class Surjectivity(Enum):
    YES = "Yes"
    AFTER_RESOLUTION = "YesAfterResolution"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ModelVerdict:
    surjective_from_base: Surjectivity
    exceptional_class: Optional[QuaternionSymbol] = None
    residue_data: tuple = ()      # (description, SquareClass)
    notes: str = ""
    kernel: Optional[str] = None


def normalize_quadric_model(q: DiagonalForm, ctx: DvrContext) -> QuadricModelCase:
    if q.rank != 4:
        raise ValueError("quadric models need rank 4")
    ents, parity, moves = _normalize(q, ctx)
    norm = DiagonalForm(ents, q.mode)
    odd = sum(parity)
    if odd == 0:
        a, b = -ents[1], -ents[2]
        return QuadricModelCase("I", a, b, ents[3] / (a * b), None, norm, moves)
    if odd == 1:
        return QuadricModelCase("II", -ents[1], -ents[2], None, ents[3], norm, moves)
    pi = ents[2]
    return QuadricModelCase("III", -ents[1], -ents[3] / pi, None, pi, norm, moves)


def normalize_conic_model(c: DiagonalForm, ctx: DvrContext) -> ConicModelCase:
    if c.rank != 3:
        raise ValueError("conic models need rank 3")
    ents, parity, moves = _normalize(c, ctx)
    norm = DiagonalForm(ents, c.mode)
    if sum(parity) == 0:
        return ConicModelCase("I", -ents[1], -ents[2], None, norm, moves)
    a = -ents[1]
    sq = is_square_in_residue_field(reduce_unit(a, ctx.valuation))
    return ConicModelCase("II", a, None, -ents[2], norm, moves, sq)


def replay_moves(entries, case) -> bool:
    """Whether the recorded moves carry ``entries`` to the normalized form."""
    target = case.normalized_entries if isinstance(case, QuadricModelCase) else case.normalized
    return apply_moves(entries, case.scaling_trace) == target.entries


def _reduce(f: RatFunc, ctx: DvrContext) -> SquareClass:
    return SquareClass.of(reduce_unit(f, ctx.valuation))


def quadric_model_verdict(mc: QuadricModelCase, ctx: DvrContext) -> ModelVerdict:
    if mc.tag == "I":
        sd = _reduce(mc.d, ctx)
        kernel = {False: "Injective", True: f"OrderTwoCandidate ({mc.a}, {mc.b})", None: "Unknown"}[sd.triviality]
        note = "Br(R) -> Br(X) is onto; kernel decided by the reduction of d"
        return ModelVerdict(Surjectivity.YES, None, (("d mod pi", sd),), note, kernel)
    if mc.tag == "II":
        return ModelVerdict(Surjectivity.YES, None, (), "Br(R) -> Br(X) is an isomorphism", "Injective")
    sa, sb = _reduce(mc.a, ctx), _reduce(mc.b, ctx)
    sab = sa * sb
    data = (("a mod pi", sa), ("b mod pi", sb), ("ab mod pi", sab))
    ta, tb, tab = sa.triviality, sb.triviality, sab.triviality
    sym = QuaternionSymbol(mc.a, mc.uniformizer, ctx.mode)
    if ta is True or tb is True:
        note = "onto: a or b reduces to a square, so every class of Br(K) unramified on X comes from Br(R)"
        if tab is True:
            note += "; overlapping sub-cases: ab also reduces to a square"
        return ModelVerdict(Surjectivity.YES, None, data, note)
    if tab is False:
        return ModelVerdict(Surjectivity.YES, None, data,
                            "onto: ab does not reduce to a square, so every class of Br(K) unramified on X comes from Br(R)")
    if tab is True:
        note = f"after resolution, {sym} spans the quotient of Br(W) by the image of Br(R)"
        if ta is False:
            note += f"; a does not reduce to a square, so {sym} is not in the image of Br(R)"
        else:
            note += "; squareness of a mod pi undecided"
        note += "; the model is singular at x=y=0, z^2-d*t^2=0"
        return ModelVerdict(Surjectivity.AFTER_RESOLUTION, sym, data, note)
    return ModelVerdict(Surjectivity.UNKNOWN, None, data, "residue squareness undecided")


def conic_model_verdict(cc: ConicModelCase, ctx: DvrContext) -> ModelVerdict:
    if cc.tag == "I":
        return ModelVerdict(Surjectivity.YES, None, (), "Br(R) -> Br(W) is onto; smooth conic over R")
    sa = _reduce(cc.a, ctx)
    if sa.triviality is True:
        note = "Br(R) -> Br(W) is onto; a reduces to a square, so the residue of the kernel generator is trivial"
    else:
        note = ("Br(R) -> Br(W) is onto; the residue of the kernel generator along the special fibre "
                "is trivial or the class of a mod pi")
    return ModelVerdict(Surjectivity.YES, None, (("a mod pi", sa),), note)


# case III identity -----------------------------------------------------------

def _fresh(names, taken) -> tuple:
    out = []
    for n in names:
        k, cand = 0, n
        while cand in taken:
            k += 1
            cand = f"{n}{k}"
        out.append(cand)
        taken = taken + (cand,)
    return tuple(out)


@dataclass(frozen=True)
class CaseIIIRewrite:
    variables: tuple
    relation: RatFunc              # q(x, y, z, 1)
    split_trace: RewriteTrace      # (a, pi) -> (a, -1) + (a, -pi(z^2-b)) + (a, z^2-b)
    norm_trace: RewriteTrace       # after substituting the relation: kill (a, x^2-a y^2)
    result: BrauerClass


def case_III_rewrite(mc: QuadricModelCase) -> CaseIIIRewrite:
    if mc.tag != "III":
        raise ValueError("case III only")
    mode = mc.normalized_entries.mode
    base = mc.a.variables
    fx, fy, fz = _fresh(("x", "y", "z"), base)
    vars_ = base + (fx, fy, fz)
    a, b, pi = (f.with_variables(vars_) for f in (mc.a, mc.b, mc.uniformizer))
    X, Y, Z = (RatFunc.var(n, vars_) for n in (fx, fy, fz))
    relation = X * X - a * Y * Y + pi * Z * Z - pi * b
    zb = Z * Z - b
    one = RatFunc.const(1, vars_)

    def sym(u, w):
        return QuaternionSymbol(u, w, mode)

    start = BrauerClass((sym(a, pi),), vars_, mode)
    steps = []
    c1 = start.replace([sym(a, pi)], [sym(a, -one), sym(a, -pi)])
    steps.append(RewriteStep(Rule.BILINEARITY, start, c1))
    c2 = c1.replace([sym(a, -pi)], [sym(a, -pi * zb), sym(a, zb.inverse())])
    steps.append(RewriteStep(Rule.BILINEARITY, c1, c2))
    c3 = c2.replace([sym(a, zb.inverse())], [sym(a, zb)])
    steps.append(RewriteStep(Rule.SQUARE_KILL, c2, c3))
    split = RewriteTrace(tuple(steps))

    # on the quadric, -pi(z^2 - b) = x^2 - a y^2
    norm_val = X * X - a * Y * Y
    d0 = c3.replace([sym(a, -pi * zb)], [sym(a, norm_val)])
    steps = [RewriteStep(Rule.NORM_RELATION, d0, d0.replace([sym(a, norm_val)], []), (X, Y))]
    cur = steps[-1].after
    if mode is GroundMode.CLOSED:
        after = cur.replace([sym(a, -one)], [])
        steps.append(RewriteStep(Rule.CONSTANT_SQUARE, cur, after))
        cur = after
    norm = RewriteTrace(tuple(steps))
    if not (replay(split, start) and replay(norm, d0)):
        raise IdentityFails("case III rewrite trace does not replay")
    return CaseIIIRewrite(vars_, relation, split, norm, cur)


def verify_case_III_identity(mc: QuadricModelCase) -> CertificateStep:
    """Check x^2 - a y^2 = -pi (z^2 - b) on the quadric and the resulting
    rewrite (a, pi) = (a, -1) + (a, z^2 - b)."""
    rw = case_III_rewrite(mc)
    vars_ = rw.variables
    mode = mc.normalized_entries.mode
    fx, fy, fz = vars_[-3:]
    a, b, pi = (f.with_variables(vars_) for f in (mc.a, mc.b, mc.uniformizer))
    X, Y, Z = (RatFunc.var(n, vars_) for n in (fx, fy, fz))
    zb = Z * Z - b
    lhs, rhs = X * X - a * Y * Y, -pi * zb
    checks = (
        Check.run("remainder_zero", vars_, mode, lhs - rhs, rw.relation, fx),
        Check.run("equal", vars_, mode, pi, -(-pi * zb) / zb),
        Check.run("same_square_class", vars_, mode, zb.inverse(), zb),
        Check.run("norm_relation", vars_, mode, a, X, Y),
    )
    direct, _ = simplify(BrauerClass((QuaternionSymbol(a, pi, mode),), vars_, mode))
    step = CertificateStep(
        "CaseIIIIdentity", vars_, mode,
        {"relation": str(rw.relation), "identity": f"{lhs} = {rhs}",
         "split_rules": ",".join(r.value for r in rw.split_trace.rules()),
         "norm_rules": ",".join(r.value for r in rw.norm_trace.rules()),
         "conclusion": f"({a}, {pi}) = {rw.result}", "direct": str(direct)},
        checks, ())
    if not step.passed:
        raise IdentityFails(f"case III identity fails for {mc.normalized_entries}")
    return step


def parse_form(text: str, variables, mode=GroundMode.EXACT) -> DiagonalForm:
    return DiagonalForm(tuple(parse_ratfunc(t, variables) for t in text.split(",")), mode)
