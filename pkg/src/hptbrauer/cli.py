"""Command-line interface: ``hptbrauer <command> ...``.

Exit codes: 0 success, 2 parse error, 3 undecided (unknown squareness),
4 degenerate form, 5 certificate refuted, 6 certificate incomplete,
7 mode not supported by the command.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .brauer import QuaternionSymbol, decompose_at, residue
from .certificate import Status, replay_certificate
from .dvr import (DvrContext, conic_model_verdict, normalize_conic_model, normalize_quadric_model,
                  quadric_model_verdict)
from .fieldcore import (ExpressionSyntaxError, GroundMode, UnknownVariable, parse_poly,
                        parse_ratfunc)
from .fieldcore.parse import identifiers
from .fieldcore.ratfunc import DivisionByZeroPolynomial
from .hilbert import INFINITY, InvalidPlace, hilbert_symbol, is_split_over_rationals, support_places
from .hpt import (BASE, HPT_F_TEXT, ModeUnsupported, NotHomogeneousDegree2, build_bundle,
                  discriminant_octic, obstruction_verdict, tangency_report, verify_unramified)
from .quadrics import DegenerateForm, DiagonalForm
from .valuation import DivisorialValuation

EXIT_OK, EXIT_PARSE, EXIT_UNKNOWN, EXIT_DEGENERATE = 0, 2, 3, 4
EXIT_REFUTED, EXIT_INCOMPLETE, EXIT_MODE = 5, 6, 7

DEFAULT_VARS = ("x", "y", "z")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    mode: GroundMode
    output: str
    variables: tuple


def _config(args, *texts) -> CliConfig:
    if args.vars:
        names = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    else:
        names = list(DEFAULT_VARS)
        for t in texts:
            for n in identifiers(t):
                if n not in names:
                    names.append(n)
        names = tuple(names)
    return CliConfig(GroundMode.parse(args.mode), args.output, names)


def _emit(cfg: CliConfig, text: str, payload: dict) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _tri(b) -> str:
    return {True: "true", False: "false", None: "unknown"}[b]


# commands --------------------------------------------------------------------

def cmd_residue(args) -> int:
    cfg = _config(args, args.a, args.b, args.p)
    a, b = parse_ratfunc(args.a, cfg.variables), parse_ratfunc(args.b, cfg.variables)
    v = DivisorialValuation(parse_poly(args.p, cfg.variables), mode=cfg.mode)
    sc = residue(QuaternionSymbol(a, b, cfg.mode), v)
    _emit(cfg, str(sc), {"class": sc.representative, "trivial": sc.triviality,
                         "prime": str(v.prime), "residue_field": str(v.residue_field),
                         "mode": cfg.mode.value})
    return EXIT_UNKNOWN if sc.triviality is None else EXIT_OK


def cmd_decompose(args) -> int:
    cfg = _config(args, args.a, args.b, args.p)
    a, b = parse_ratfunc(args.a, cfg.variables), parse_ratfunc(args.b, cfg.variables)
    v = DivisorialValuation(parse_poly(args.p, cfg.variables), mode=cfg.mode)
    dec = decompose_at(QuaternionSymbol(a, b, cfg.mode), v)
    trace = [{"rule": s.rule.value, "before": str(s.before), "after": str(s.after)} for s in dec.trace.steps]
    lines = [f"unramified: {dec.unramified}", f"ramified: {dec.ramified or 0}"]
    lines += [f"  {t['rule']}: {t['before']} -> {t['after']}" for t in trace]
    lines += [f"check {k}: {_tri(val)}" for k, val in dec.checks.items()]
    _emit(cfg, "\n".join(lines), {"unramified": str(dec.unramified),
                                  "ramified": str(dec.ramified) if dec.ramified else None,
                                  "trace": trace, "checks": dec.checks})
    return EXIT_UNKNOWN if None in dec.checks.values() else EXIT_OK


def cmd_classify(args) -> int:
    entries = [e.strip() for e in args.entries.split(",")]
    cfg = _config(args, *entries, args.uniformizer)
    form = DiagonalForm(tuple(parse_ratfunc(e, cfg.variables) for e in entries), cfg.mode)
    ctx = DvrContext.of(parse_poly(args.uniformizer, cfg.variables), mode=cfg.mode)
    if form.rank == 4:
        mc = normalize_quadric_model(form, ctx)
        verdict = quadric_model_verdict(mc, ctx)
        title = f"case {mc.tag}"
        fields = {"a": mc.a, "b": mc.b, "d": mc.d, "uniformizer": mc.uniformizer}
        normalized, moves = mc.normalized_entries, mc.scaling_trace
    else:
        cc = normalize_conic_model(form, ctx)
        verdict = conic_model_verdict(cc, ctx)
        title = f"conic case {cc.tag}"
        fields = {"a": cc.a, "b": cc.b, "uniformizer": cc.uniformizer}
        normalized, moves = cc.normalized, cc.scaling_trace
    fields = {k: (str(val) if val is not None else None) for k, val in fields.items()}
    residues = [{"divisor": d, "class": sc.representative, "trivial": sc.triviality}
                for d, sc in verdict.residue_data]
    payload = {"case": title, "normalized": str(normalized), **fields,
               "moves": [str(m) for m in moves],
               "surjective_from_base": verdict.surjective_from_base.value,
               "exceptional_class": str(verdict.exceptional_class) if verdict.exceptional_class else None,
               "kernel": verdict.kernel, "residue_data": residues, "notes": verdict.notes}
    lines = [title, f"normalized: {normalized}"]
    lines += [f"{k}: {val}" for k, val in fields.items() if val is not None]
    lines.append("moves: " + ("; ".join(payload["moves"]) or "none"))
    lines.append(f"surjective from base: {payload['surjective_from_base']}")
    if verdict.kernel:
        lines.append(f"kernel: {verdict.kernel}")
    if verdict.exceptional_class:
        lines.append(f"exceptional class: {verdict.exceptional_class}")
    lines += [f"{r['divisor']}: {r['class']}, square: {_tri(r['trivial'])}" for r in residues]
    lines.append(f"note: {verdict.notes}")
    _emit(cfg, "\n".join(lines), payload)
    return EXIT_UNKNOWN if verdict.surjective_from_base.value == "Unknown" else EXIT_OK


def _hpt_F(args, cfg_vars=BASE):
    text = args.F if args.F is not None else HPT_F_TEXT
    return parse_poly(text, cfg_vars)


def cmd_verify_hpt(args) -> int:
    cfg = CliConfig(GroundMode.parse(args.mode), args.output, BASE)
    F = _hpt_F(args)
    b = build_bundle(F)
    cert = verify_unramified(b, F, cfg.mode)
    verdict = obstruction_verdict(cert)
    if cfg.output == "json":
        d = cert.to_dict()
        d["verdict"] = {"obstruction": verdict.obstruction, "unknown": verdict.unknown, "text": verdict.text}
        print(json.dumps(d, indent=2, sort_keys=True))
    else:
        lines = [f"F = {F}", f"status: {cert.status_text}"]
        for i, s in enumerate(cert.steps, 1):
            ax = ", ".join(a.value for a in s.axioms) or "-"
            lines.append(f"  [{i}] {s.rule}: {_tri(s.passed)} ({len(s.checks)} checks; axioms: {ax})")
            for c in s.checks:
                if c.passed is not True:
                    lines.append(f"      {_tri(c.passed)}: {c.identity}")
        lines.append(f"replay: {'identical' if replay_certificate(cert).identical else 'MISMATCH'}")
        lines.append(f"verdict: {verdict.text}")
        print("\n".join(lines))
    return {Status.VERIFIED: EXIT_OK, Status.REFUTED: EXIT_REFUTED,
            Status.INCOMPLETE: EXIT_INCOMPLETE}[cert.status]


def cmd_discriminant(args) -> int:
    cfg = CliConfig(GroundMode.parse(args.mode), args.output, BASE)
    F = _hpt_F(args)
    det = discriminant_octic(build_bundle(F))
    x, y, z = (parse_poly(n, BASE) for n in BASE)
    expected = x * x * y * y * z * z * F
    ok = det == expected
    _emit(cfg, f"det = {det}\nequals x^2*y^2*z^2*F: {_tri(ok)}",
          {"determinant": str(det), "equals_xyz_squared_F": ok})
    return EXIT_OK


def cmd_tangency(args) -> int:
    cfg = CliConfig(GroundMode.parse(args.mode), args.output, BASE)
    F = _hpt_F(args)
    rep = tangency_report(F)
    lines = []
    for c in rep.lines:
        sq = f"({c.root})^2" if c.root is not None else "not a square"
        lines.append(f"{c.line}: {c.restriction} = {sq}")
    for p in rep.points:
        lines.append(f"F{p.point} = {p.value}")
    lines.append(f"pass: {_tri(rep.passed)}")
    if rep.globally_square:
        lines.append("warning: F is a square; the discriminant check will fail")
    _emit(cfg, "\n".join(lines), {
        "lines": [{"line": c.line, "restriction": str(c.restriction),
                   "root": str(c.root) if c.root is not None else None, "pass": c.passed} for c in rep.lines],
        "points": [{"point": list(p.point), "value": str(p.value), "pass": p.passed} for p in rep.points],
        "pass": rep.passed, "globally_square": rep.globally_square})
    return EXIT_OK


def _rational(text: str):
    from fractions import Fraction
    try:
        return Fraction(text)
    except ValueError as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def cmd_hilbert(args) -> int:
    cfg = CliConfig(GroundMode.EXACT, args.output, ())
    a, b = _rational(args.a), _rational(args.b)
    if a == 0 or b == 0:
        raise UsageError("Hilbert symbol entries must be nonzero")
    if args.place is not None:
        place = INFINITY if args.place == INFINITY else int(args.place)
        places = [place]
    else:
        places = support_places(a, b)
    values = {str(p): hilbert_symbol(a, b, p) for p in places}
    split = is_split_over_rationals(a, b)
    lines = [f"({a}, {b})_{p} = {s:+d}" for p, s in values.items()]
    lines.append(f"split over Q: {_tri(split)}")
    _emit(cfg, "\n".join(lines), {"a": str(a), "b": str(b), "symbols": values, "split": split})
    return EXIT_OK


# parser ------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, default_mode: str, vars_flag: bool = True) -> None:
    p.add_argument("--mode", choices=["exact", "closed"], default=default_mode,
                   help=f"ground field: exact rationals or symbolic algebraic closure (default: {default_mode})")
    p.add_argument("--output", choices=["text", "json"], default="text", help="output format (default: text)")
    if vars_flag:
        p.add_argument("--vars", default=None,
                       help="comma-separated variable names (default: x,y,z then others in order of appearance)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hptbrauer", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residue", help="residue of the symbol (a, b) at a prime")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)
    p.add_argument("-p", required=True, help="prime polynomial")
    _common(p, "exact")
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("decompose", help="split (a, b) into unramified part + (-prime, t)")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)
    p.add_argument("-p", required=True, help="prime polynomial")
    _common(p, "exact")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("classify", help="normalize a diagonal conic or quadric over a DVR")
    p.add_argument("entries", help='comma-separated diagonal entries, e.g. "1,-a,pi,-pi*b"')
    p.add_argument("-u", "--uniformizer", default="pi", help="uniformizer (default: pi)")
    _common(p, "exact")
    p.set_defaults(func=cmd_classify)

    for name, func, hlp in (("verify-hpt", cmd_verify_hpt, "certify the unramified class of the bundle"),
                            ("discriminant", cmd_discriminant, "determinant of the bundle matrix"),
                            ("tangency", cmd_tangency, "tangency of F to the coordinate triangle")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("-F", default=None, help=f"quadratic form in x, y, z (default: {HPT_F_TEXT})")
        _common(p, "closed" if name == "verify-hpt" else "exact", vars_flag=False)
        p.set_defaults(func=func)

    p = sub.add_parser("hilbert", help="Hilbert symbols of two nonzero rationals")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--place", default=None, help=f"a prime or {INFINITY!r} (default: all relevant places)")
    _common(p, "exact", vars_flag=False)
    p.set_defaults(func=cmd_hilbert)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExpressionSyntaxError, UnknownVariable, DivisionByZeroPolynomial, NotHomogeneousDegree2,
            InvalidPlace, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateForm as exc:
        print(f"error: degenerate form: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ModeUnsupported as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
