import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hptbrauer.brauer import QuaternionSymbol, residue, same_class
from hptbrauer.fieldcore import GroundMode, RatFunc, parse_poly, parse_ratfunc
from hptbrauer.quadrics import (DegenerateForm, DiagonalForm, KernelTag, PatternMismatch, brauer_kernel,
                                candidate_primes, conclude_split_from_isotropy, discriminant_class)
from hptbrauer.valuation import DivisorialValuation
from strategies import XY, nonzero_polys

EXACT, CLOSED = GroundMode.EXACT, GroundMode.CLOSED
F1 = "x^2+y^2+1-2*x*y-2*x-2*y"
ABD = ("a", "b", "d")


def form(texts, vars_=XY, mode=EXACT):
    return DiagonalForm(tuple(parse_ratfunc(t, vars_) for t in texts), mode)


def test_discriminant_examples():
    assert discriminant_class(form(["1", "-a", "-b", "a*b*d"], ABD)).representative == "d"
    for mode in (EXACT, CLOSED):
        sc = discriminant_class(form(["y", "x", "x*y", F1], mode=mode))
        assert sc.representative == str(parse_poly(F1, XY)) and sc.triviality is False
    assert discriminant_class(form(["1", "1", "1", "1"])).triviality is True
    assert discriminant_class(form(["1", "1", "1", "-1"])).triviality is False
    assert discriminant_class(form(["1", "1", "1", "-1"], mode=CLOSED)).triviality is True


def test_degenerate():
    with pytest.raises(DegenerateForm):
        form(["1", "0", "x", "y"])


@st.composite
def equivalent_forms(draw):
    ents = [RatFunc(draw(nonzero_polys(max_deg=2, max_terms=3))) for _ in range(4)]
    perm = draw(st.permutations(range(4)))
    lam = RatFunc(draw(nonzero_polys(max_deg=1)))
    sq = [RatFunc(draw(nonzero_polys(max_deg=1))) for _ in range(4)]
    other = [ents[perm[i]] * lam * sq[i] * sq[i] for i in range(4)]
    return DiagonalForm(tuple(ents)), DiagonalForm(tuple(other))


@settings(max_examples=15)
@given(equivalent_forms())
def test_discriminant_and_kernel_invariance(pair):
    q, r = pair
    dq, dr = discriminant_class(q), discriminant_class(r)
    assert dq.representative == dr.representative and dq.triviality == dr.triviality
    assert brauer_kernel(q).tag is brauer_kernel(r).tag


def test_kernel_examples():
    for mode in (EXACT, CLOSED):
        assert brauer_kernel(form(["y", "x", "x*y", F1], mode=mode)).tag is KernelTag.INJECTIVE
    k = brauer_kernel(form(["1", "-x", "-y", "x*y"]))
    assert k.tag is KernelTag.ORDER_TWO and str(k.generator) == "(x, y)"
    v, sc = k.nonzero_witness
    assert str(v.prime) == "x" and sc.triviality is False
    k = brauer_kernel(form(["1", "-1", "-1", "1"]))
    assert k.tag is KernelTag.ORDER_TWO and str(k.generator) == "(1, 1)" and k.nonzero_witness is None


def test_candidate_primes():
    ents = tuple(parse_ratfunc(t, XY) for t in ["1", "x+y+1", "(x-1)^2*y", "x^2+y^2"])
    names = [str(p) for p, _ in candidate_primes(ents)]
    assert names[:2] == ["x", "y"] and "x+y+1" in names and "x-1" in names and "x^2+y^2" not in names


@settings(max_examples=25)
@given(nonzero_polys(max_deg=2), nonzero_polys(max_deg=2), nonzero_polys(max_deg=1), nonzero_polys(max_deg=1))
def test_generator_residues_match_direct_symbol(a, b, s, lam):
    a, b, s, lam = (RatFunc(p) for p in (a, b, s, lam))
    q = DiagonalForm((lam, -a * lam, -b * lam, a * b * s * s * lam))
    k = brauer_kernel(q)
    assert k.tag is KernelTag.ORDER_TWO
    direct = QuaternionSymbol(a, b)
    for prime, main in candidate_primes(q.entries):
        v = DivisorialValuation(prime, main)
        assert same_class(residue(k.generator, v), residue(direct, v)) is not False


def test_conclude_split():
    rel = form(["1", "y", "x", "x*y"])
    step = conclude_split_from_isotropy(rel, QuaternionSymbol(parse_ratfunc("-x", XY), parse_ratfunc("-y", XY)))
    assert step.passed and step.axioms[0].value == "NormFormIsotropy"
    rel_c = form(["1", "y", "x", "x*y"], mode=CLOSED)
    step = conclude_split_from_isotropy(rel_c, QuaternionSymbol(parse_ratfunc("x", XY), parse_ratfunc("y", XY), CLOSED))
    assert step.passed
    with pytest.raises(PatternMismatch):
        conclude_split_from_isotropy(rel, QuaternionSymbol(parse_ratfunc("x", XY), parse_ratfunc("y", XY)))
    scaled = form(["3", "3*y", "3*x*4", "3*x*y"])
    step = conclude_split_from_isotropy(scaled, QuaternionSymbol(parse_ratfunc("-x", XY), parse_ratfunc("-y", XY)))
    assert step.passed
