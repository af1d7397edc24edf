import json
import subprocess
import sys

import pytest

from qcong.cli import main
from qcong.report import dump_document, load_document


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("family,n,value", [("b_4_9", 7, 12), ("b", 10, 0), ("p", 5, 7)])
def test_coeff_examples(capsys, family, n, value):
    code, out, _ = run(capsys, "coeff", "--family", family, "--n", str(n))
    assert code == 0
    assert out.split() == [str(n), str(value)]


def test_coeff_quotient_string_and_mod(capsys):
    code, out, _ = run(capsys, "coeff", "--family", "f1^2 f3", "--nmax", "4", "--mod", "2")
    assert code == 0
    assert [line.split()[1] for line in out.splitlines()] == ["1", "0", "1", "1", "1"]


def test_coeff_structured(capsys):
    code, out, _ = run(capsys, "coeff", "--family", "b_3_8", "--nmax", "5", "--format", "structured")
    doc = json.loads(out)
    assert code == 0
    assert [doc["coefficients"][str(n)] for n in range(6)] == ["1", "1", "2", "2", "4", "5"]


@pytest.mark.parametrize(
    "argv",
    [
        ["coeff", "--family", "zz", "--n", "3"],
        ["coeff", "--n", "3"],
        ["coeff", "--family", "p", "--n", "-1"],
        ["coeff", "--family", "p", "--n", "3", "--mod", "1"],
        ["verify", "--id", "nope"],
        ["verify"],
        ["verify", "--id", "newman:2,2,3,5"],
        ["verify", "--id", "T1.1.i", "--primes", "4,5"],
        ["verify", "--id", "inv_f1f7_2dissect", "--order", "50"],
        ["report", "--only", "everything"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--id", "T1.3.i", "--nmax", "100")
    assert code == 0
    assert out.startswith("PASS")


def test_verify_printed_fails(capsys):
    code, out, _ = run(capsys, "verify", "--id", "T1.2.iii-printed")
    assert code == 1
    assert "p=3, j=1" in out and "331.5" in out


def test_verify_identity_order(capsys):
    code, out, _ = run(capsys, "verify", "--id", "euler_5dissect", "--order", "300")
    assert code == 0


def test_verify_vacuous_exit_3(capsys):
    code, out, _ = run(capsys, "verify", "--id", "T1.4.ii.a")
    assert code == 3
    assert "omega table" in out


def test_verify_mixed_pass_and_vacuous_is_0(capsys):
    code, _, _ = run(capsys, "verify", "--id", "T1.4.ii.a", "--id", "T1.3.i")
    assert code == 0


def test_verify_other_id_kinds(capsys):
    for ident in ("newman:2,1,3,7", "oracle:regular:4,9", "oracle:colored:3^1,5^1", "dissect:f1:7", "S2"):
        code, _, _ = run(capsys, "verify", "--id", ident)
        assert code == 0, ident


def test_report_only_counts(capsys):
    code, out, _ = run(capsys, "report", "--only", "identities", "--format", "structured")
    assert code == 0
    assert len(json.loads(out)["entries"]) == 11
    code, out, _ = run(capsys, "report", "--only", "newman", "--format", "structured")
    assert code == 0
    assert len(json.loads(out)["entries"]) == 8


def test_structured_round_trip(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, _, _ = run(capsys, "report", "--only", "oracles", "--format", "structured", "--output", str(path))
    text = path.read_text()
    doc = load_document(text)
    assert code == 0
    assert json.dumps(doc, indent=2, ensure_ascii=False) + "\n" == text
    ids = [e["id"] for e in doc["entries"]]
    assert ids == sorted(ids)
    assert list(doc) == ["tool_version", "run_params", "entries"]
    for entry in doc["entries"]:
        assert list(entry) == ["id", "kind", "status", "checks_run", "failures", "wall_ms"]
        assert isinstance(entry["checks_run"], str) and isinstance(entry["wall_ms"], str)


def test_failures_serialise_as_strings(capsys):
    code, out, _ = run(capsys, "verify", "--id", "T1.2.iii-printed", "--primes", "3", "--format", "structured")
    entry = json.loads(out)["entries"][0]
    assert code == 1
    first = entry["failures"][0]
    assert first == {"params": {"n": "0", "p": "3", "j": "1", "check": "integrality"}, "index": "331.5", "residue": ""}


def test_dump_document_is_deterministic():
    from qcong.report import VerificationReport

    reps = [VerificationReport("b", "x", checks_run=2), VerificationReport("a", "x")]
    text = dump_document("0", {"k": 1}, reps)
    assert text == dump_document("0", {"k": 1}, list(reversed(reps)))
    assert [e["status"] for e in load_document(text)["entries"]] == ["vacuous", "pass"]


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    for ident in ("T1.2.iii-corrected", "newman:6,1,3,13", "euler_5dissect", "dissect:f1_cubed:3"):
        assert ident in out


def test_jobs_flag_same_result(capsys):
    _, a, _ = run(capsys, "report", "--only", "dissections", "--jobs", "3")
    _, b, _ = run(capsys, "report", "--only", "dissections")
    strip = lambda text: [line.split()[:3] for line in text.splitlines()]
    assert strip(a) == strip(b)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcong", "coeff", "--family", "p", "--n", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.split() == ["5", "7"]
