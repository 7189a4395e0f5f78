import pytest
from hypothesis import given, settings

from hptbrauer.certificate import Axiom, Certificate, Status, replay_certificate
from hptbrauer.fieldcore import GroundMode, MPoly, parse_poly
from hptbrauer.hpt import (BASE, ModeUnsupported, NotHomogeneousDegree2, QuadricBundle, build_bundle,
                           discriminant_octic, hpt_polynomial, obstruction_verdict,
                           rational_section_probe, tangency_report, verify_unramified)
from oracles import cofactor_det, to_sympy
from strategies import quadratic_forms, polys

P = lambda t: parse_poly(t, BASE)
STEP_RULES = ["CyclicSymmetry", "Discriminant", "NonzeroResidue", "GenericResidues",
              "LineX", "LineY", "ClosedPoints", "Conclusion"]


@pytest.fixture(scope="module")
def hpt_cert():
    F = hpt_polynomial()
    return verify_unramified(build_bundle(F), F)


def test_build_bundle():
    b = build_bundle(hpt_polynomial())
    assert b.diagonal() == (P("y*z"), P("z*x"), P("x*y"), hpt_polynomial())
    FULL = ("x", "y", "z", "u", "v", "w", "t")
    expected = parse_poly("y*z*u^2+z*x*v^2+x*y*w^2+(x^2+y^2+z^2-2*x*y-2*x*z-2*y*z)*t^2", FULL)
    assert b.equation() == expected
    build_bundle(P("z^2"))
    with pytest.raises(NotHomogeneousDegree2):
        build_bundle(P("x^3"))
    with pytest.raises(NotHomogeneousDegree2):
        build_bundle(P("x^2+x"))


def test_bundle_invariants():
    z = MPoly.zero(BASE)
    with pytest.raises(ValueError):
        QuadricBundle(((P("x^2"), P("y^2"), z, z), (z, z, z, z), (z, z, z, z), (z, z, z, z)))
    with pytest.raises(NotHomogeneousDegree2):
        QuadricBundle(((P("x"), z, z, z), (z, z, z, z), (z, z, z, z), (z, z, z, z)))


def test_discriminant_examples():
    F = hpt_polynomial()
    assert discriminant_octic(build_bundle(F)) == P("x^2*y^2*z^2") * F
    z2 = P("z^2")
    zero = MPoly.zero(BASE)
    b = QuadricBundle(tuple(tuple(z2 if i == j else zero for j in range(4)) for i in range(4)))
    assert discriminant_octic(b) == P("z^8")


@settings(max_examples=20)
@given(quadratic_forms())
def test_octic_identity_for_every_quadratic_form(F):
    assert discriminant_octic(build_bundle(F)) == P("x^2*y^2*z^2") * F


@settings(max_examples=10)
@given(quadratic_forms(), quadratic_forms(), quadratic_forms())
def test_symmetric_bundle_matches_cofactor(a, b, c):
    zero = MPoly.zero(BASE)
    m = ((a, b, zero, c), (b, c, a, zero), (zero, a, b, b), (c, zero, b, a))
    bundle = QuadricBundle(m)
    assert to_sympy(discriminant_octic(bundle)) == cofactor_det([[to_sympy(e) for e in r] for r in m])


def test_tangency():
    rep = tangency_report(hpt_polynomial())
    assert [str(c.root) for c in rep.lines] == ["y-z", "x-z", "x-y"]
    assert [p.value for p in rep.points] == [1, 1, 1]
    assert rep.passed and not rep.globally_square
    rep = tangency_report(P("x^2+y^2+z^2"))
    assert not rep.passed and rep.lines[0].root is None
    rep = tangency_report(P("(x+y+z)^2"))
    assert all(c.passed for c in rep.lines) and rep.globally_square


def test_certificate_shape(hpt_cert):
    c = hpt_cert
    assert c.status is Status.VERIFIED
    assert [s.rule for s in c.steps] == STEP_RULES
    assert c.axioms_used() == set(Axiom)
    assert replay_certificate(c).identical
    assert Certificate.from_json(c.to_json()) == c


def test_deterministic(hpt_cert):
    F = hpt_polynomial()
    assert verify_unramified(build_bundle(F), F).to_json() == hpt_cert.to_json()


def test_exact_mode_rejected():
    F = hpt_polynomial()
    with pytest.raises(ModeUnsupported):
        verify_unramified(build_bundle(F), F, GroundMode.EXACT)


@pytest.mark.parametrize("text,step", [("x^2+y^2+z^2", 5), ("(x+y+z)^2", 2)])
def test_negative_controls(text, step):
    F = P(text)
    c = verify_unramified(build_bundle(F), F)
    assert c.status is Status.REFUTED and c.failed_step == step
    v = obstruction_verdict(c)
    assert not v.obstruction and v.text.startswith("no obstruction established")
    assert replay_certificate(c).identical


def test_single_coefficient_mutations_flip_a_check(hpt_cert):
    F = hpt_polynomial()
    base_bits = [ch.passed for s in hpt_cert.steps for ch in s.checks]
    for e in F.terms:
        G = F + MPoly(BASE, {e: 1})
        c = verify_unramified(build_bundle(G), G)
        bits = [ch.passed for s in c.steps for ch in s.checks]
        assert c.status is Status.REFUTED
        assert any(b is not True for b in bits) and len(bits) >= len(base_bits) - 3


def test_obstruction_verdict(hpt_cert):
    v = obstruction_verdict(hpt_cert)
    assert v.obstruction and not v.unknown and "not stably rational" in v.text
    assert v.steps_consumed == tuple(range(1, 9))


def test_rational_section_probe():
    F = hpt_polynomial()
    assert rational_section_probe(build_bundle(F)) is None
    zero = MPoly.zero(BASE)
    diag = (zero, zero, P("x*y"), F)
    b = QuadricBundle(tuple(tuple(diag[i] if i == j else zero for j in range(4)) for i in range(4)))
    assert rational_section_probe(b) == (1, 0, 0, 0)
    b = build_bundle(MPoly.zero(BASE))
    assert rational_section_probe(b) == (0, 0, 0, 1)


@pytest.mark.parametrize("scale", [2, -1, 3])
def test_scalar_multiples_verify_over_closed_ground(scale):
    F = hpt_polynomial() * MPoly.const(scale, BASE)
    assert verify_unramified(build_bundle(F), F).status is Status.VERIFIED
