"""The quadric surface bundle yz*u^2 + zx*v^2 + xy*w^2 + F*t^2 = 0 over the plane.

``verify_unramified`` rebuilds, step by step, the argument that the pullback
of the class (x, y) is nonzero and unramified on a resolution of the total
space, emitting a replayable :class:`~hptbrauer.certificate.Certificate`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .brauer import QuaternionSymbol
from .certificate import Axiom, Certificate, CertificateStep, Check, Status, format_point
from .fieldcore import (GroundMode, MPoly, RatFunc, determinant, is_square_poly, parse_poly,
                        polynomial_square_root, squarefree_decomposition)
from .quadrics import DiagonalForm, brauer_kernel, conclude_split_from_isotropy

BASE = ("x", "y", "z")
FIBER = ("u", "v", "w", "t")
FULL = BASE + FIBER
CHART = ("x", "y")
CYCLE = "x>y,y>z,z>x,u>v,v>w,w>u"

HPT_F_TEXT = "x^2+y^2+z^2-2*x*y-2*x*z-2*y*z"


def hpt_polynomial() -> MPoly:
    return parse_poly(HPT_F_TEXT, BASE)


class NotHomogeneousDegree2(ValueError):
    pass


class ModeUnsupported(ValueError):
    pass


@dataclass(frozen=True)
class QuadricBundle:
    matrix: tuple                 # 4x4, symmetric, entries quadratic forms in x, y, z
    fiber_coords: tuple = FIBER

    def __post_init__(self):
        m = tuple(tuple(_as_base(e) for e in row) for row in self.matrix)
        if len(m) != 4 or any(len(r) != 4 for r in m):
            raise ValueError("a quadric bundle needs a 4x4 matrix")
        for i in range(4):
            for j in range(4):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
                e = m[i][j]
                if not e.is_zero() and not e.is_homogeneous(2):
                    raise NotHomogeneousDegree2(f"entry ({i}, {j}) = {e}")
        object.__setattr__(self, "matrix", m)

    def equation(self) -> MPoly:
        """sum a_ij f_i f_j over x, y, z, u, v, w, t."""
        fs = [MPoly.var(n, FULL) for n in self.fiber_coords]
        out = MPoly.zero(FULL)
        for i in range(4):
            for j in range(4):
                if not self.matrix[i][j].is_zero():
                    out = out + self.matrix[i][j].with_variables(FULL) * fs[i] * fs[j]
        return out

    def diagonal(self) -> tuple:
        return tuple(self.matrix[i][i] for i in range(4))


def _as_base(e) -> MPoly:
    if isinstance(e, MPoly):
        return e.with_variables(BASE)
    return MPoly.const(e, BASE)


def build_bundle(F: MPoly) -> QuadricBundle:
    F = _as_base(F)
    if not F.is_zero() and not F.is_homogeneous(2):
        raise NotHomogeneousDegree2(f"{F} is not a quadratic form in x, y, z")
    x, y, z = (MPoly.var(n, BASE) for n in BASE)
    zero = MPoly.zero(BASE)
    diag = (y * z, z * x, x * y, F)
    return QuadricBundle(tuple(tuple(diag[i] if i == j else zero for j in range(4)) for i in range(4)))


def discriminant_octic(b: QuadricBundle) -> MPoly:
    return determinant(b.matrix)


# geometry of F ------------------------------------------------------------------

@dataclass(frozen=True)
class LineCheck:
    line: str
    restriction: MPoly
    root: Optional[MPoly]
    passed: bool


@dataclass(frozen=True)
class PointCheck:
    point: tuple
    value: Fraction
    passed: bool


@dataclass(frozen=True)
class TangencyReport:
    lines: tuple
    points: tuple
    globally_square: bool

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.lines + self.points)


def tangency_report(F: MPoly) -> TangencyReport:
    F = _as_base(F)
    lines = []
    for v in BASE:
        r = F.subs_constants({v: 0})
        root = None if r.is_zero() else polynomial_square_root(r)
        lines.append(LineCheck(f"{v}=0", r, root, root is not None))
    points = []
    for i in range(3):
        pt = tuple(1 if j == i else 0 for j in range(3))
        val = F.evaluate(dict(zip(BASE, pt)))
        points.append(PointCheck(pt, val, val != 0))
    glob = not F.is_zero() and is_square_poly(F, GroundMode.CLOSED)
    return TangencyReport(tuple(lines), tuple(points), glob)


def rational_section_probe(b: QuadricBundle) -> Optional[tuple]:
    """A coordinate point e_i lying on every fibre, if some a_ii vanishes."""
    eq = b.equation()
    for i in range(4):
        if b.matrix[i][i].is_zero():
            pt = {n: int(j == i) for j, n in enumerate(b.fiber_coords)}
            if eq.subs_constants(pt).is_zero():
                return tuple(pt[n] for n in b.fiber_coords)
    return None


# the certificate ---------------------------------------------------------------

def _chart(F: MPoly) -> MPoly:
    return F.subs_constants({"z": 1}).with_variables(CHART)


def _cx(text: str) -> RatFunc:
    return RatFunc(parse_poly(text, CHART))


def _matrix_text(rows) -> str:
    return ";".join(",".join(str(e) for e in row) for row in rows)


def _norm_form_step_checks(mode: GroundMode) -> tuple:
    """Fibre <y, x, xy, c^2> ~ <1, y, x, xy>: the norm form of (x, y)."""
    rel = DiagonalForm((_cx("1"), _cx("y"), _cx("x"), _cx("x*y")), mode)
    step = conclude_split_from_isotropy(rel, QuaternionSymbol(_cx("x"), _cx("y"), mode))
    return step.checks, str(rel)


def _step_symmetry(b: QuadricBundle, mode) -> CertificateStep:
    eq = b.equation()
    checks = (Check.run("invariant", FULL, mode, eq, CYCLE),)
    return CertificateStep("CyclicSymmetry", FULL, mode,
                           {"equation": str(eq), "permutation": CYCLE,
                            "reduces": "lines y=0, z=0 to x=0; points to (0:0:1)"},
                           checks, (Axiom.SYMMETRY_REDUCTION,))


def _step_discriminant(F1: MPoly, mode) -> CertificateStep:
    x, y = _cx("x"), _cx("y")
    fib = (y, x, x * y, RatFunc(F1))
    rows = [[fib[i].num if i == j else MPoly.zero(CHART) for j in range(4)] for i in range(4)]
    prod = x * x * y * y * RatFunc(F1)
    checks = (
        Check.run("determinant", CHART, mode, _matrix_text(rows), prod),
        Check.run("nonsquare", CHART, mode, prod),
    )
    kernel = "degenerate"
    if not F1.is_zero():
        kernel = brauer_kernel(DiagonalForm(fib, mode)).tag.value
    return CertificateStep("Discriminant", CHART, mode,
                           {"fibre": "<" + ", ".join(str(e) for e in fib) + ">",
                            "kernel": kernel},
                           checks, ())


def _step_nonzero(mode) -> CertificateStep:
    checks = (
        Check.run("valuation", CHART, mode, "x", "x", 1),
        Check.run("valuation", CHART, mode, "y", "x", 0),
        Check.run("residue_class", CHART, mode, "x", "y", "x", "y", "false"),
    )
    return CertificateStep("NonzeroResidue", CHART, mode,
                           {"alpha": "(x, y)", "prime": "x"}, checks, ())


def generic_primes(F1: MPoly) -> list:
    """Sample primes of the chart off the lines x=0, y=0: the factors of F and x-y."""
    out = []
    if not F1.is_zero() and not F1.is_constant():
        out = [str(f) for f, _ in squarefree_decomposition(F1)[1] if str(f) not in ("x", "y")]
    if "x-y" not in out:
        out.append("x-y")
    return out


def _step_generic(F1: MPoly, mode) -> CertificateStep:
    checks = []
    primes = generic_primes(F1)
    for p in primes:
        checks.append(Check.run("valuation", CHART, mode, "x", p, 0))
        checks.append(Check.run("valuation", CHART, mode, "y", p, 0))
        checks.append(Check.run("residue_class", CHART, mode, "x", "y", p, "1", "true"))
    return CertificateStep("GenericResidues", CHART, mode,
                           {"primes": ",".join(primes),
                            "evaluation": "restriction to a curve over an algebraically closed field vanishes"},
                           tuple(checks), (Axiom.TSEN,))


def _step_line(F1: MPoly, var: str, mode) -> CertificateStep:
    other = "y" if var == "x" else "x"
    nf, rel = _norm_form_step_checks(mode)
    checks = (
        Check.run("valuation", CHART, mode, var, var, 1),
        Check.run("valuation", CHART, mode, other, var, 0),
        Check.run("residue_square", CHART, mode, F1, var),
    ) + nf
    return CertificateStep(f"Line{var.upper()}", CHART, mode,
                           {"line": f"{var}=0", "F": str(F1), "relation": rel,
                            "conclusion": "(x, y) vanishes in the completion"},
                           checks, (Axiom.HENSEL, Axiom.NORM_FORM_ISOTROPY))


def _step_points(F1: MPoly, mode) -> CertificateStep:
    nf, rel = _norm_form_step_checks(mode)
    origin = format_point({"x": 0, "y": 0})
    checks = (
        Check.run("simplifies_to_zero", CHART, mode, "2|y", "ConstantSquare"),
        Check.run("simplifies_to_zero", CHART, mode, "x|2", "ConstantSquare"),
        Check.run("value_at", CHART, mode, F1, origin),
    ) + nf
    return CertificateStep("ClosedPoints", CHART, mode,
                           {"point": origin, "F": str(F1), "relation": rel,
                            "other_points": "x or y is a nonzero constant there"},
                           checks, (Axiom.HENSEL, Axiom.NORM_FORM_ISOTROPY))


def _step_conclusion(mode) -> CertificateStep:
    checks = (Check.run("residue_class", CHART, mode, "x", "y", "x", "y", "false"),)
    return CertificateStep("Conclusion", CHART, mode,
                           {"claim": "beta is nonzero and unramified on a resolution"},
                           checks, (Axiom.PURITY_INJECTIVITY,))


def verify_unramified(b: QuadricBundle, F: MPoly, mode: GroundMode = GroundMode.CLOSED) -> Certificate:
    if mode is not GroundMode.CLOSED:
        raise ModeUnsupported("the unramifiedness argument needs constants to be squares")
    F = _as_base(F)
    if b != build_bundle(F):
        raise ValueError("bundle was not built from F")
    F1 = _chart(F)
    steps = (
        _step_symmetry(b, mode),
        _step_discriminant(F1, mode),
        _step_nonzero(mode),
        _step_generic(F1, mode),
        _step_line(F1, "x", mode),
        _step_line(F1, "y", mode),
        _step_points(F1, mode),
        _step_conclusion(mode),
    )
    target = {"alpha": "(x, y)", "beta": "pullback of (x, y) to the function field of the bundle",
              "F": str(F), "bundle": str(b.equation())}
    return Certificate.assemble(target, FULL, steps)


@dataclass(frozen=True)
class ObstructionVerdict:
    obstruction: bool
    unknown: bool
    text: str
    steps_consumed: tuple


def obstruction_verdict(c: Certificate) -> ObstructionVerdict:
    if c.status is Status.VERIFIED:
        text = ("nonzero unramified class vanishing on all components over the discriminant: "
                "the very general member of the family is not stably rational")
        return ObstructionVerdict(True, False, text, tuple(range(1, len(c.steps) + 1)))
    unknown = c.status is Status.INCOMPLETE
    text = "no obstruction established"
    if unknown:
        text += " (unknown squareness at step %d)" % c.failed_step
    else:
        text += f" (refuted at step {c.failed_step})"
    return ObstructionVerdict(False, unknown, text, tuple(range(1, (c.failed_step or 1))))
