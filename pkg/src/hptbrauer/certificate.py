"""Replayable certificates: named steps of exact checks plus declared axioms.

Every check stores its operands as canonical printed polynomials, so the
pass bit can be recomputed from the serialized text alone.  Axioms are the
non-symbolic bridges (Tsen, Hensel, ...) and are recorded, never checked.
"""
from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .fieldcore import (GroundMode, RatFunc, determinant, parse_ratfunc,
                        polynomial_square_root, pseudo_remainder)
from .valuation import (DivisorialValuation, FieldKind, NotAUnit, ZeroInput, is_square_ratfunc,
                        reduce_unit, split_prime_power)

FORMAT_VERSION = 1


class Axiom(Enum):
    TSEN = "Tsen"
    HENSEL = "Hensel"
    PURITY_INJECTIVITY = "PurityInjectivity"
    NORM_FORM_ISOTROPY = "NormFormIsotropy"
    SYMMETRY_REDUCTION = "SymmetryReduction"


class Status(Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    INCOMPLETE = "Incomplete"


# claim evaluators --------------------------------------------------------------
# each takes (variables, mode, *operands) and returns (passed, identity text)

def _rf(text: str, variables) -> RatFunc:
    return parse_ratfunc(text, variables)


def _equal(variables, mode, a, b):
    return _rf(a, variables) == _rf(b, variables), f"{a} = {b}"


def _square(variables, mode, a, r):
    fa, fr = _rf(a, variables), _rf(r, variables)
    return fa == fr * fr, f"{a} = ({r})^2"


def _nonsquare(variables, mode, a):
    f = _rf(a, variables)
    if f.is_zero():
        return False, f"{a} is zero"
    return not is_square_ratfunc(f, mode), f"{a} is not a square"


def _nonzero(variables, mode, a):
    return not _rf(a, variables).is_zero(), f"{a} != 0"


def _valuation(variables, mode, a, p, m):
    v = DivisorialValuation(_rf(p, variables).as_poly(), mode=mode)
    k = split_prime_power(_rf(a, variables), v)[0]
    return k == int(m), f"v[{p}]({a}) = {k}"


def _residue(variables, mode, a, b, p, rep, trivial):
    from .brauer import QuaternionSymbol, residue
    v = DivisorialValuation(_rf(p, variables).as_poly(), mode=mode)
    sc = residue(QuaternionSymbol(_rf(a, variables), _rf(b, variables), mode), v)
    want = {"true": True, "false": False}[trivial]
    got_rep = sc.representative
    ok = sc.triviality is want and got_rep == rep
    if sc.triviality is None:
        ok = None
    return ok, f"residue[{p}]({a}, {b}) = {got_rep}, trivial: {_tri(sc.triviality)}"


def _residue_square(variables, mode, a, p):
    # the reduction of a at p has an exact square root in the residue field
    v = DivisorialValuation(_rf(p, variables).as_poly(), mode=mode)
    try:
        e = reduce_unit(_rf(a, variables), v)
    except (NotAUnit, ZeroInput):
        return False, f"{a} is not a unit at {p}"
    if v.residue_field.kind not in (FieldKind.GROUND, FieldKind.TRANSCENDENTAL):
        return None, f"residue field of {p} is not modelled"
    f = e.coords[0]
    c = Fraction(1)
    if mode is GroundMode.CLOSED:
        # constants are squares: take the root of the monic part
        c = f.num.leading_coefficient() / f.den.leading_coefficient()
        f = f * RatFunc.const(1 / c, f.variables)
    rn, rd = polynomial_square_root(f.num), polynomial_square_root(f.den)
    if rn is None or rd is None or f.is_zero():
        return False, f"{a} mod {p} = {e.coords[0]}, not a square"
    root = f"({RatFunc(rn, rd)})^2"
    return True, f"{a} mod {p} = {root}" if c == 1 else f"{a} mod {p} = {c}*{root}"


def _value_at(variables, mode, a, point):
    pt = _parse_point(point)
    f = _rf(a, variables)
    n, d = f.num.evaluate(pt), f.den.evaluate(pt)
    if d == 0:
        return False, f"{a} has a pole at {point}"
    val = n / d
    return val != 0, f"{a} at {point} = {val}"


def _same_square_class(variables, mode, a, b):
    fa, fb = _rf(a, variables), _rf(b, variables)
    if fa.is_zero() or fb.is_zero():
        return False, f"{a} ~ {b}: zero entry"
    return is_square_ratfunc(fa / fb, mode), f"{a} / ({b}) is a square"


def _remainder_zero(variables, mode, a, q, var):
    fa, fq = _rf(a, variables), _rf(q, variables)
    r = pseudo_remainder(fa.num, fq.num, var)
    return r.is_zero(), f"{a} = 0 mod {q}"


def _determinant(variables, mode, matrix, expected):
    rows = [[_rf(c, variables).as_poly() for c in row.split(",")] for row in matrix.split(";")]
    d = determinant(rows)
    return d == _rf(expected, variables).as_poly(), f"det = {d}"


def _invariant(variables, mode, a, perm):
    mapping = dict(pair.split(">") for pair in perm.split(","))
    f = _rf(a, variables)
    g = RatFunc(f.num.rename(mapping), f.den.rename(mapping))
    return f == g, f"{a} invariant under {perm}"


def _trace_replays(variables, mode, start, rules):
    # start is "a|b;c|d"; rules is the expected rule sequence of simplify
    from .brauer import BrauerClass, replay, simplify
    pairs = [tuple(_rf(e, variables) for e in sym.split("|")) for sym in start.split(";") if sym]
    c = BrauerClass.of(pairs, variables, mode)
    out, trace = simplify(c)
    got = ",".join(r.value for r in trace.rules())
    return replay(trace, c) and out.is_empty() and got == rules, f"{c} -> {out} via [{got}]"


def _norm_relation(variables, mode, a, x0, y0):
    # (a, x0^2 - a*y0^2) = 0, checked as a single NormRelation rewrite
    from .brauer import BrauerClass, QuaternionSymbol, RewriteStep, Rule, check_step
    fa, fx, fy = (_rf(t, variables) for t in (a, x0, y0))
    n = fx * fx - fa * fy * fy
    if n.is_zero():
        return False, f"{x0}^2 - ({a})*({y0})^2 vanishes"
    before = BrauerClass((QuaternionSymbol(fa, n, mode),), variables, mode)
    step = RewriteStep(Rule.NORM_RELATION, before, BrauerClass.zero(variables, mode), (fx, fy))
    return check_step(step), f"({a}, {n}) = 0"


CLAIMS: dict[str, Callable] = {
    "equal": _equal,
    "square": _square,
    "nonsquare": _nonsquare,
    "nonzero": _nonzero,
    "valuation": _valuation,
    "residue_class": _residue,
    "residue_square": _residue_square,
    "value_at": _value_at,
    "same_square_class": _same_square_class,
    "remainder_zero": _remainder_zero,
    "determinant": _determinant,
    "invariant": _invariant,
    "simplifies_to_zero": _trace_replays,
    "norm_relation": _norm_relation,
}


def _tri(b: Optional[bool]) -> str:
    return {True: "true", False: "false", None: "unknown"}[b]


def _parse_point(text: str) -> dict:
    out = {}
    for part in text.split(","):
        name, val = part.split("=")
        out[name.strip()] = int(val)
    return out


def format_point(point: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in point.items())


# data model ----------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    claim: str
    operands: tuple
    passed: Optional[bool]
    identity: str

    @classmethod
    def run(cls, claim: str, variables, mode: GroundMode, *operands) -> Check:
        ops = tuple(str(o) for o in operands)
        passed, identity = evaluate_claim(claim, variables, mode, ops)
        return cls(claim, ops, passed, identity)


def evaluate_claim(claim: str, variables, mode: GroundMode, operands: tuple):
    try:
        return CLAIMS[claim](tuple(variables), mode, *operands)
    except (ZeroDivisionError, ValueError, SyntaxError) as exc:
        return False, f"{claim} failed: {exc}"


@dataclass(frozen=True)
class CertificateStep:
    rule: str
    variables: tuple
    mode: GroundMode
    inputs: dict = field(default_factory=dict, hash=False, compare=True)
    checks: tuple = ()
    axioms: tuple = ()

    @property
    def passed(self) -> Optional[bool]:
        bits = [c.passed for c in self.checks]
        if any(b is False for b in bits):
            return False
        if any(b is None for b in bits):
            return None
        return True

    def recheck(self) -> tuple:
        return tuple(evaluate_claim(c.claim, self.variables, self.mode, c.operands)[0] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "variables": list(self.variables),
            "mode": self.mode.value,
            "inputs": dict(self.inputs),
            "checks": [{"claim": c.claim, "operands": list(c.operands),
                        "identity": c.identity, "pass": c.passed} for c in self.checks],
            "axioms": [a.value for a in self.axioms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> CertificateStep:
        checks = tuple(Check(c["claim"], tuple(c["operands"]), c["pass"], c["identity"]) for c in d["checks"])
        return cls(d["rule"], tuple(d["variables"]), GroundMode(d["mode"]), dict(d["inputs"]),
                   checks, tuple(Axiom(a) for a in d["axioms"]))


def status_of(steps) -> tuple:
    """(Status, 1-based index of the first failing / undecided step or None)."""
    for i, s in enumerate(steps, 1):
        if s.passed is False:
            return Status.REFUTED, i
    for i, s in enumerate(steps, 1):
        if s.passed is None:
            return Status.INCOMPLETE, i
    return Status.VERIFIED, None


@dataclass(frozen=True)
class Certificate:
    target: dict
    variables: tuple
    steps: tuple
    status: Status
    failed_step: Optional[int] = None

    @classmethod
    def assemble(cls, target: dict, variables, steps) -> Certificate:
        st, idx = status_of(steps)
        return cls(dict(target), tuple(variables), tuple(steps), st, idx)

    def axioms_used(self) -> set:
        return {a for s in self.steps for a in s.axioms}

    @property
    def status_text(self) -> str:
        if self.failed_step is None:
            return self.status.value
        return f"{self.status.value}({self.failed_step})"

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "variables": list(self.variables),
            "target": dict(self.target),
            "steps": [dict(index=i, **s.to_dict()) for i, s in enumerate(self.steps, 1)],
            "status": self.status.value,
            "failed_step": self.failed_step,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported certificate version {d.get('version')!r}")
        steps = tuple(CertificateStep.from_dict(s) for s in d["steps"])
        return cls(dict(d["target"]), tuple(d["variables"]), steps, Status(d["status"]), d["failed_step"])

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ReplayReport:
    identical: bool
    mismatches: tuple   # (step index, check index, recorded, recomputed)
    status: Status
    failed_step: Optional[int]


def replay_certificate(cert: Certificate) -> ReplayReport:
    """Recompute every check from its operands and compare with the recorded bits."""
    mismatches = []
    for i, step in enumerate(cert.steps, 1):
        for j, (chk, got) in enumerate(zip(step.checks, step.recheck()), 1):
            if got is not chk.passed:
                mismatches.append((i, j, chk.passed, got))
    st, idx = status_of(cert.steps)
    same = not mismatches and (st, idx) == (cert.status, cert.failed_step)
    return ReplayReport(same, tuple(mismatches), st, idx)
