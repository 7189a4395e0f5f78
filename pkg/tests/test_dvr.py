import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hptbrauer.dvr import (DvrContext, IdentityFails, Surjectivity, apply_moves, case_III_rewrite,
                           conic_model_verdict, normalize_conic_model, normalize_quadric_model,
                           parse_form, quadric_model_verdict, replay_moves, verify_case_III_identity)
from hptbrauer.fieldcore import GroundMode, MPoly, RatFunc, parse_poly
from hptbrauer.quadrics import DegenerateForm, DiagonalForm
from strategies import nonzero_polys

EXACT, CLOSED = GroundMode.EXACT, GroundMode.CLOSED
V = ("a", "b", "d", "p")
YP = ("y", "p")
CANONICAL = {"I": "1,-a,-b,a*b*d", "II": "1,-a,-b,p", "III": "1,-a,p,-p*b"}


def ctx(vars_=V, mode=EXACT, prime="p", main=None):
    return DvrContext.of(parse_poly(prime, vars_), main, mode)


@pytest.mark.parametrize("mode", [EXACT, CLOSED])
@pytest.mark.parametrize("tag,text", sorted(CANONICAL.items()))
def test_canonical_tags(tag, text, mode):
    q = parse_form(text, V, mode)
    mc = normalize_quadric_model(q, ctx(mode=mode))
    assert mc.tag == tag and mc.scaling_trace == () and mc.normalized_entries == q


def test_case_II_example_with_trace():
    q = parse_form("p^2,-a,-b,p^3", V)
    mc = normalize_quadric_model(q, ctx())
    assert mc.tag == "II"
    assert str(mc.normalized_entries) == "<1, -a, -b, p>"
    assert [m.kind for m in mc.scaling_trace] == ["strip", "strip"]
    assert replay_moves(q.entries, mc)


def test_read_off_case_III():
    mc = normalize_quadric_model(parse_form("1,-a,p,-p*b", V), ctx())
    assert (str(mc.a), str(mc.b), str(mc.uniformizer)) == ("a", "b", "p")


def test_degenerate():
    with pytest.raises(DegenerateForm):
        parse_form("1,0,-b,p", V)


def random_equivalent(q: DiagonalForm, rng: random.Random) -> DiagonalForm:
    vars_ = q.variables
    p = MPoly.var("p", vars_)
    unit = lambda: RatFunc(MPoly.var(rng.choice("abd"), vars_) + rng.randint(1, 3))
    ents = list(q.entries)
    rng.shuffle(ents)
    lam = unit() * RatFunc(p) ** rng.randint(-2, 2) * rng.choice([1, -1, 2])
    out = []
    for e in ents:
        s = unit() * RatFunc(p) ** rng.randint(-1, 2)
        out.append(e * lam * s * s)
    return DiagonalForm(tuple(out), q.mode)


@pytest.mark.parametrize("tag,text", sorted(CANONICAL.items()))
def test_tag_invariance_and_idempotence(tag, text):
    rng = random.Random(tag)
    c = ctx()
    for _ in range(25):
        q = random_equivalent(parse_form(text, V), rng)
        mc = normalize_quadric_model(q, c)
        assert mc.tag == tag
        assert replay_moves(q.entries, mc)
        again = normalize_quadric_model(mc.normalized_entries, c)
        assert again.scaling_trace == () and again.normalized_entries == mc.normalized_entries
        for u in (mc.a, mc.b) + ((mc.d,) if mc.d is not None else ()):
            assert c.order(u) == 0


def test_quadric_verdicts():
    c = ctx()
    v = quadric_model_verdict(normalize_quadric_model(parse_form(CANONICAL["I"], V), c), c)
    assert v.surjective_from_base is Surjectivity.YES and v.kernel == "Injective"
    v = quadric_model_verdict(normalize_quadric_model(parse_form("1,-a,-b,a*b", V), c), c)
    assert v.kernel.startswith("OrderTwoCandidate")
    v = quadric_model_verdict(normalize_quadric_model(parse_form(CANONICAL["II"], V), c), c)
    assert v.surjective_from_base is Surjectivity.YES and "isomorphism" in v.notes
    v = quadric_model_verdict(normalize_quadric_model(parse_form("1,-a^2,p,-p*b", V), c), c)
    assert v.surjective_from_base is Surjectivity.YES and v.exceptional_class is None


def test_case_III_exceptional_class():
    c = ctx(YP)
    mc = normalize_quadric_model(parse_form("1,-y,p,-p*y*(1+p)", YP), c)
    v = quadric_model_verdict(mc, c)
    assert v.surjective_from_base is Surjectivity.AFTER_RESOLUTION
    assert str(v.exceptional_class) == "(y, p)"
    assert "not in the image" in v.notes


def test_case_III_overlap_flagged():
    c = ctx(YP)
    v = quadric_model_verdict(normalize_quadric_model(parse_form("1,-y^2,p,-p*4", YP), c), c)
    assert v.surjective_from_base is Surjectivity.YES and "overlapping" in v.notes


def test_case_III_unknown_over_abstract_residue_field():
    c = ctx(YP, prime="p^3-y", main="p")
    q = parse_form("1,-(y+1),p^3-y,-(p^3-y)*(y+1)", YP)
    v = quadric_model_verdict(normalize_quadric_model(q, c), c)
    assert v.surjective_from_base is Surjectivity.UNKNOWN


@pytest.mark.parametrize("mode", [EXACT, CLOSED])
@pytest.mark.parametrize("text,result", [
    ("1,-a,p,-p*b", {EXACT: "(a, p) = (a, -1) + (a, z^2-b)", CLOSED: "(a, p) = (a, z^2-b)"}),
    ("1,-1,p,-p", {EXACT: "(1, p) = (1, -1) + (1, z^2-1)", CLOSED: "(1, p) = (1, z^2-1)"}),
])
def test_case_III_identity(text, result, mode):
    mc = normalize_quadric_model(parse_form(text, V, mode), ctx(mode=mode))
    step = verify_case_III_identity(mc)
    assert step.passed and step.inputs["conclusion"] == result[mode]
    assert step.recheck() == tuple(c.passed for c in step.checks)


def test_case_III_identity_trivial_and_perturbed():
    mc = normalize_quadric_model(parse_form("1,-1,p,-p", V), ctx())
    assert verify_case_III_identity(mc).inputs["direct"] == "0"
    mc = normalize_quadric_model(parse_form("1,-a,p,-p*b^2", V), ctx())
    assert mc.tag == "III" and str(mc.b) == "b^2"
    assert verify_case_III_identity(mc).inputs["conclusion"] == "(a, p) = (a, -1) + (a, -b^2+z^2)"


def test_fresh_names_avoid_clashes():
    vars_ = ("x", "y", "z", "p")
    mc = normalize_quadric_model(parse_form("1,-x,p,-p*y", vars_), ctx(vars_))
    rw = case_III_rewrite(mc)
    assert rw.variables == ("x", "y", "z", "p", "x1", "y1", "z1")


@settings(max_examples=20)
@given(nonzero_polys(variables=YP, max_deg=2), nonzero_polys(variables=YP, max_deg=2),
       st.sampled_from([EXACT, CLOSED]))
def test_case_III_identity_on_random_units(a, b, mode):
    p = MPoly.var("p", YP)
    for u in (a, b):
        if u.subs_constants({"p": 0}).is_zero():
            u = u + 1
    a = a if not a.subs_constants({"p": 0}).is_zero() else a + 1
    b = b if not b.subs_constants({"p": 0}).is_zero() else b + 1
    if a.is_zero() or b.is_zero():
        return
    q = DiagonalForm((RatFunc.const(1, YP), -RatFunc(a), RatFunc(p), -RatFunc(p * b)), mode)
    mc = normalize_quadric_model(q, ctx(YP, mode))
    assert mc.tag == "III"
    assert verify_case_III_identity(mc).passed


def test_conics():
    c = ctx()
    cc = normalize_conic_model(parse_form("1,-a,-b", V), c)
    assert cc.tag == "I" and conic_model_verdict(cc, c).surjective_from_base is Surjectivity.YES
    cc = normalize_conic_model(parse_form("1,-a,-p", V), c)
    assert cc.tag == "II" and cc.a_residue_square is False
    v = conic_model_verdict(cc, c)
    assert v.residue_data[0][1].representative == "a" and "class of a" in v.notes
    q = parse_form("p,-p*a,-b", V)
    cc = normalize_conic_model(q, c)
    assert cc.tag == "II" and str(cc.normalized) == "<1, -a, -b*p>"
    assert apply_moves(q.entries, cc.scaling_trace) == cc.normalized.entries
    cc = normalize_conic_model(parse_form("1,-a^2,-p", V), c)
    assert cc.a_residue_square is True and "trivial" in conic_model_verdict(cc, c).notes
