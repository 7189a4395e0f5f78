import json
import subprocess
import sys

import pytest

from hptbrauer import cli
from hptbrauer.certificate import Certificate, CertificateStep, Check
from hptbrauer.fieldcore import GroundMode


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_residue_examples(capsys):
    code, out, _ = run(capsys, "residue", "-a", "x", "-b", "y", "-p", "x", "--vars", "x,y")
    assert code == cli.EXIT_OK and out.strip() == "class: y, trivial: false"
    code, out, _ = run(capsys, "residue", "-a", "x+1", "-b", "y", "-p", "x")
    assert code == 0 and out.strip() == "class: 1, trivial: true"
    code, out, _ = run(capsys, "residue", "-a", "x", "-b", "x", "-p", "x")
    assert out.strip() == "class: -1, trivial: false"
    code, out, _ = run(capsys, "residue", "-a", "x", "-b", "x", "-p", "x", "--mode", "closed")
    assert out.strip() == "class: 1, trivial: true"


def test_residue_unknown_exit(capsys):
    code, out, _ = run(capsys, "residue", "-a", "y+1", "-b", "x^3-y", "-p", "x^3-y")
    assert code == cli.EXIT_UNKNOWN and "unknown" in out


def test_residue_json(capsys):
    code, out, _ = run(capsys, "residue", "-a", "x", "-b", "y", "-p", "x", "--output", "json")
    d = json.loads(out)
    assert d["class"] == "y" and d["trivial"] is False and d["mode"] == "exact"


def test_parse_errors(capsys):
    for argv in (["residue", "-a", "x+", "-b", "y", "-p", "x"],
                 ["residue", "-a", "x", "-b", "y", "-p", "q", "--vars", "x,y"],
                 ["residue", "-a", "x/0", "-b", "y", "-p", "x"],
                 ["hilbert", "2", "0"],
                 ["hilbert", "2", "3", "--place", "4"]):
        code, _, err = run(capsys, *argv)
        assert code == cli.EXIT_PARSE and err.startswith("error:")


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "-a", "x", "-b", "y", "-p", "x")
    assert code == 0 and "unramified" in out and "check" in out
    code, out, _ = run(capsys, "decompose", "-a", "x", "-b", "y", "-p", "x", "--output", "json")
    d = json.loads(out)
    assert all(v is True for v in d["checks"].values())


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "1,-a,pi,-pi*b")
    assert code == 0 and out.splitlines()[0] == "case III"
    code, out, _ = run(capsys, "classify", "1,-a,-b")
    assert code == 0 and out.splitlines()[0] == "conic case I"
    code, out, _ = run(capsys, "classify", "1,-a,pi,-pi*b", "--output", "json")
    d = json.loads(out)
    assert d["case"] == "case III" and d["surjective_from_base"] == "Yes"


def test_classify_degenerate(capsys):
    code, _, err = run(capsys, "classify", "1,0,-b,pi")
    assert code == cli.EXIT_DEGENERATE and "degenerate" in err


def test_verify_hpt(capsys):
    code, out, _ = run(capsys, "verify-hpt")
    assert code == 0 and "status: Verified" in out and "not stably rational" in out
    code, out, _ = run(capsys, "verify-hpt", "-F", "x^2+y^2+z^2")
    assert code == cli.EXIT_REFUTED and "Refuted(5)" in out
    code, _, _ = run(capsys, "verify-hpt", "-F", "x^3")
    assert code == cli.EXIT_PARSE
    code, _, err = run(capsys, "verify-hpt", "--mode", "exact")
    assert code == cli.EXIT_MODE and err


def test_verify_hpt_json(capsys):
    code, out, _ = run(capsys, "verify-hpt", "--output", "json")
    d = json.loads(out)
    verdict = d.pop("verdict")
    assert verdict["obstruction"] is True
    assert Certificate.from_dict(d).status_text == "Verified"


def test_verify_hpt_incomplete(capsys, monkeypatch):
    # no quadratic F reaches an undecidable residue field, so feed one in
    def fake(b, F, mode):
        step = CertificateStep("S", ("x",), mode, {}, (Check("nonzero", ("x",), None, "undecided"),), ())
        return Certificate.assemble({}, ("x",), [step])
    monkeypatch.setattr(cli, "verify_unramified", fake)
    code, out, _ = run(capsys, "verify-hpt")
    assert code == cli.EXIT_INCOMPLETE and "Incomplete(1)" in out


def test_discriminant_and_tangency(capsys):
    code, out, _ = run(capsys, "discriminant")
    assert code == 0 and "equals x^2*y^2*z^2*F: true" in out
    code, out, _ = run(capsys, "tangency")
    assert code == 0 and "pass: true" in out and "(y-z)^2" in out
    code, out, _ = run(capsys, "tangency", "-F", "(x+y+z)^2")
    assert "warning" in out


def test_hilbert(capsys):
    code, out, _ = run(capsys, "hilbert", "-1", "-1")
    assert code == 0 and "(-1, -1)_2 = -1" in out and "split over Q: false" in out
    code, out, _ = run(capsys, "hilbert", "2", "7", "--place", "7", "--output", "json")
    assert json.loads(out)["symbols"] == {"7": 1}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hptbrauer", "residue", "-a", "x", "-b", "y", "-p", "x"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout.strip() == "class: y, trivial: false"


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
