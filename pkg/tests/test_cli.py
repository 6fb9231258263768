import json
import subprocess
import sys

import pytest

from rmcorr.cli import main

B2 = r"(p \to q) \land (q \to r) \to (p \to r)"


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_single_run_success_with_verification(capsys):
    code, out, _ = run_cli(["-i", B2, "--verify", "2"], capsys)
    assert code == 0
    assert "Approximation phase" in out
    assert "Elimination order: ['+p', '+r', '+q']" in out
    assert "Verified: agreement on all 211 frames" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run_cli(["-i", r"p \to"], capsys)
    assert code == 2
    assert "parse error" in err


def test_elimination_failure_exit_code(capsys):
    code, out, _ = run_cli(["-i", r"((p \to p) \to q) \to q"], capsys)
    assert code == 1
    assert "Elimination failed" in out


def test_verify_bound_guard(capsys):
    code, _, err = run_cli(["-i", "p", "--verify", "9"], capsys)
    assert code == 2
    assert "capped" in err


def test_corpus_run(capsys):
    code, out, _ = run_cli(["--corpus", "bundled-axioms"], capsys)
    assert code == 0
    lines = [l for l in out.strip().splitlines() if l]
    assert len(lines) == 36
    assert all("\tok\t" in l for l in lines)
    b2 = next(l for l in lines if l.startswith("conjunctive_syllogism"))
    assert "[+p,+r,+q]" in b2


def test_corpus_batch_output_stable(capsys):
    code1, out1, _ = run_cli(["--corpus", "bundled-axioms", "--format", "tptp"],
                             capsys)
    code2, out2, _ = run_cli(["--corpus", "bundled-axioms", "--format", "tptp"],
                             capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_corpus_from_file_with_failure(tmp_path, capsys):
    path = tmp_path / "mini.jsonl"
    path.write_text(json.dumps({"name": "bad", "formula":
                                r"((p \to p) \to q) \to q"}) + "\n")
    code, out, _ = run_cli(["--corpus", str(path)], capsys)
    assert code == 1
    assert "bad\tfailed" in out


def test_corpus_expected_mismatch_sets_disagree_exit(tmp_path, capsys):
    path = tmp_path / "mini.jsonl"
    path.write_text(json.dumps({"name": "identity", "formula": r"p \to p",
                                "expected_fo": "wrong"}) + "\n")
    code, out, _ = run_cli(["--corpus", str(path)], capsys)
    assert code == 3
    assert "expected-mismatch" in out


def test_json_format_and_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(["-i", B2, "--format", "json", "--trace",
                            "--out", str(target)], capsys)
    assert code == 0
    obj = json.loads(target.read_text())
    assert obj["status"] == "success"
    assert obj["goals"][0]["trace"]


def test_bi_syntax_run(capsys):
    code, out, _ = run_cli(["-i", r"p * q -* r", "--syntax", "bi",
                            "--verify", "2"], capsys)
    assert code == 0
    assert "Verified" in out


def test_ra_syntax_with_converse(capsys):
    code, out, _ = run_cli(
        ["-i", r"p^\smallsmile \to p^\smallsmile", "--syntax", "ra"], capsys)
    assert code == 0


def test_file_input(tmp_path, capsys):
    path = tmp_path / "axiom.txt"
    path.write_text(B2 + "\n")
    code, out, _ = run_cli(["--file", str(path)], capsys)
    assert code == 0
    assert "Correspondent" in out


def test_missing_file(capsys):
    code, _, err = run_cli(["--file", "/nonexistent/axiom.txt"], capsys)
    assert code == 2
    assert "error" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rmcorr", "-i", "p"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
