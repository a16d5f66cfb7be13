import csv
import io
import json
import subprocess
import sys

import pytest

from fninv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def results(text):
    return json.loads(text)["results"]


def test_seed_required(capsys):
    for argv in (
        ["verify-claims", "--claim", "entropy"],
        ["protocol", "--runs", "1"],
        ["bounds", "--kind", "affine-lemma", "--n", "101"],
        ["invert-bench", "--n", "11"],
    ):
        code, _, err = run(capsys, *argv)
        assert code == 2 and "--seed" in err


def test_record_shape(capsys):
    code, out, _ = run(capsys, "verify-claims", "--claim", "correct-preimage", "--seed", "1")
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"tool", "version", "config", "results", "wall_time_s"}
    assert rec["results"][0]["value"] == "19/27"
    assert rec["config"]["seed"] == 1


def test_verify_claims_all_small(capsys):
    code, out, _ = run(capsys, "verify-claims", "--seed", "3", "--trials", "20000", "--n", "17", "--max-cols", "2")
    assert code == 0
    ids = [r["claim_id"] for r in results(out)]
    assert len(ids) == 8


def test_protocol_runs_and_audit(capsys, tmp_path):
    path = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "protocol", "--n", "17", "--family", "q1", "--runs", "200", "--seed", "4", "--transcripts", str(path))
    assert code == 0
    row = results(out)[0]
    assert row["audit_ok"] and row["max_bits"] <= row["bound"]
    assert 0.5 < row["reject_rate"] < 0.8
    code, out, _ = run(capsys, "protocol", "--audit", str(path))
    assert code == 0 and results(out)[0]["transcripts"] == 200
    lines = path.read_text().splitlines()
    rec = json.loads(lines[0])
    rec["bits"] -= 1
    path.write_text("\n".join([json.dumps(rec)] + lines[1:]) + "\n")
    code, out, _ = run(capsys, "protocol", "--audit", str(path))
    assert code == 1 and not results(out)[0]["ok"]


def test_protocol_rejects_non_linear(capsys):
    code, _, err = run(capsys, "protocol", "--inverter", "max-index", "--runs", "1", "--seed", "0")
    assert code == 1 and "LinearityViolation" in err
    code, _, _ = run(capsys, "protocol", "--inverter", '{"kind": "full-table", "n": 5}', "--n", "8", "--seed", "0")
    assert code == 2


def test_bounds_sweep_csv(capsys):
    code, out, _ = run(
        capsys, "bounds", "--kind", "affine-lemma", "--n", "101", "--mu", "0.25", "--sweep", "i=1:4:1", "--format", "csv", "--seed", "0"
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["i"] for r in rows] == ["1", "2", "3"]
    assert float(rows[0]["bound"]) == pytest.approx(0.2599, abs=1e-4)


def test_bounds_empty_sweep_is_header_only(capsys):
    code, out, _ = run(capsys, "bounds", "--kind", "affine-lemma", "--n", "101", "--sweep", "i=3:3:1", "--format", "csv", "--seed", "0")
    assert code == 0 and out.strip().count("\n") == 0 and out.startswith("n,i,")


def test_bounds_parameter_error_exit(capsys):
    code, _, err = run(capsys, "bounds", "--kind", "affine-theorem", "--n", "32", "--m", "3", "--seed", "0")
    assert code == 2 and "n/16" in err


def test_factor_compare(capsys):
    code, out, _ = run(capsys, "bounds", "--kind", "factor-compare", "--n", "4096", "--m", "4", "--seed", "0")
    rows = results(out)
    assert code == 0 and len(rows) == 4
    assert all(r["affine_factor"] == pytest.approx(r["tree_factor"]) for r in rows)


def test_invert_bench_hellman(capsys):
    code, out, _ = run(
        capsys, "invert-bench", "--inverter", "hellman", "--n", "1009", "--m-tables", "10", "--t-chain", "10", "--trials", "2000", "--seed", "5"
    )
    assert code == 0
    row = results(out)[0]
    assert row["success"] >= 5 * row["baseline_q_over_n"]


def test_invert_bench_uniform_challenges(capsys):
    code, out, _ = run(
        capsys,
        "invert-bench", "--inverter", "zero-advice-affine", "--n", "101", "--functions", "40",
        "--trials", "40000", "--challenges", "uniform", "--seed", "2",
    )
    assert code == 0
    assert results(out)[0]["success"] == pytest.approx(2 / 101 - 1 / 101**2, abs=0.005)


def test_out_file(capsys, tmp_path):
    path = tmp_path / "o.json"
    code, out, _ = run(capsys, "verify-claims", "--claim", "entropy", "--seed", "1", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["results"][0]["verdict"] == "PASS"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fninv.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "fninv" in proc.stdout
