"""Diagonal quadratic forms over a rational function field and the Brauer kernel of quadric surfaces."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Optional

from .brauer import BrauerClass, QuaternionSymbol, residue, simplify
from .certificate import Axiom, CertificateStep, Check
from .fieldcore import GroundMode, MPoly, RatFunc, as_ratfunc, squarefree_decomposition
from .fieldcore.polyalg import content_in
from .valuation import (DivisorialValuation, ResidueField, ResidueElement, SquareClass,
                        is_square_ratfunc, square_class_rep)


class DegenerateForm(ValueError):
    pass


class PatternMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DiagonalForm:
    entries: tuple
    mode: GroundMode = GroundMode.EXACT

    def __post_init__(self):
        ents = tuple(as_ratfunc(e) for e in self.entries)
        if len(ents) not in (3, 4):
            raise ValueError(f"diagonal forms of rank 3 or 4 only, got rank {len(ents)}")
        if len({e.variables for e in ents}) != 1:
            raise ValueError("entries over different variable lists")
        for i, e in enumerate(ents):
            if e.is_zero():
                raise DegenerateForm(f"entry {i} is zero")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def of(cls, entries, variables, mode=GroundMode.EXACT) -> DiagonalForm:
        return cls(tuple(_lift(e, variables) for e in entries), mode)

    @property
    def variables(self) -> tuple:
        return self.entries[0].variables

    @property
    def rank(self) -> int:
        return len(self.entries)

    def product(self) -> RatFunc:
        out = RatFunc.const(1, self.variables)
        for e in self.entries:
            out = out * e
        return out

    def scaled(self, lam) -> DiagonalForm:
        lam = _lift(lam, self.variables)
        return DiagonalForm(tuple(e * lam for e in self.entries), self.mode)

    def __str__(self):
        return "<" + ", ".join(str(e) for e in self.entries) + ">"


def _lift(value, variables) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MPoly):
        return RatFunc(value)
    return RatFunc.const(value, variables)


def discriminant_class(q: DiagonalForm) -> SquareClass:
    """Square class of the product of the entries, as an element of K*/K*^2."""
    if q.rank != 4:
        raise ValueError("the discriminant is defined here for rank 4 forms")
    rep = RatFunc(square_class_rep(q.product(), GroundMode.EXACT))
    fld = ResidueField.function_field(q.variables, q.mode)
    return SquareClass.of(ResidueElement(fld, (rep,)))


class KernelTag(Enum):
    INJECTIVE = "Injective"
    ORDER_TWO = "OrderTwoCandidate"


@dataclass(frozen=True)
class KernelVerdict:
    tag: KernelTag
    generator: Optional[QuaternionSymbol] = None
    nonzero_witness: Optional[tuple] = None   # (DivisorialValuation, SquareClass)
    note: str = ""


def candidate_primes(entries) -> list:
    """Primes worth testing for residues: each variable, plus squarefree
    factors of the entries that are linear and primitive in some variable
    (hence irreducible)."""
    found: list = []
    vars_ = entries[0].variables
    for v in vars_:
        p = MPoly.var(v, vars_)
        if any(e.num.degree_in(v) or e.den.degree_in(v) for e in entries):
            found.append((p, v))
    seen = {str(p) for p, _ in found}
    for e in entries:
        for part in (e.num, e.den):
            if part.is_constant():
                continue
            for f, _ in squarefree_decomposition(part)[1]:
                if str(f) in seen:
                    continue
                main = next((v for v in vars_ if f.degree_in(v) == 1 and content_in(f, v).is_constant()), None)
                if main is not None:
                    found.append((f, main))
                    seen.add(str(f))
    return found


def brauer_kernel(q: DiagonalForm) -> KernelVerdict:
    """Kernel of Br(K) -> Br(X) for the quadric surface q = 0."""
    if q.rank != 4:
        raise ValueError("brauer_kernel needs a rank 4 form")
    e0, e1, e2, _ = q.entries
    disc = discriminant_class(q)
    if disc.triviality is False:
        return KernelVerdict(KernelTag.INJECTIVE, note=f"discriminant {disc.representative} is not a square")
    a, b = -e1 / e0, -e2 / e0
    gen = QuaternionSymbol(a, b, q.mode)
    if disc.triviality is None:
        return KernelVerdict(KernelTag.ORDER_TWO, gen, note="discriminant squareness undecided")
    simplified, _ = simplify(BrauerClass((gen,), q.variables, q.mode))
    if simplified.is_empty():
        return KernelVerdict(KernelTag.ORDER_TWO, gen, note="generator simplifies to zero: kernel trivial")
    for prime, main in candidate_primes(q.entries):
        v = DivisorialValuation(prime, main, q.mode)
        sc = residue(gen, v)
        if sc.triviality is False:
            return KernelVerdict(KernelTag.ORDER_TWO, gen, (v, sc),
                                 note=f"generator nonzero: residue at {prime} is {sc.representative}")
    return KernelVerdict(KernelTag.ORDER_TWO, gen, note="no nonzero witness among the candidate primes")


def conclude_split_from_isotropy(relation: DiagonalForm, target: QuaternionSymbol) -> CertificateStep:
    """Certify that ``target`` splits wherever ``relation`` is isotropic.

    After dividing by the first entry the relation must read
    <1, -a, -b, ab> for target (a, b), up to reordering and square factors.
    """
    if relation.rank != 4:
        raise PatternMismatch("the norm form has rank 4")
    mode = target.mode
    vars_ = relation.variables
    e0 = relation.entries[0]
    f = [e / e0 for e in relation.entries[1:]]
    a, b = target.a, target.b
    pattern = [-a, -b, a * b]
    for perm in permutations(range(3)):
        if all(is_square_ratfunc(f[i] / pattern[perm[i]], mode) for i in range(3)):
            checks = tuple(Check.run("same_square_class", vars_, mode, f[i], pattern[perm[i]])
                           for i in range(3))
            return CertificateStep(
                "NormFormMatch", vars_, mode,
                {"relation": str(relation), "target": str(target),
                 "conclusion": f"{target} splits where {relation} is isotropic"},
                checks, (Axiom.NORM_FORM_ISOTROPY,))
    raise PatternMismatch(f"{relation} does not match the norm form of {target}")
