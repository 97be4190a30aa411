"""End-to-end CLI behavior: gen, synth, verify, stats, and exit codes."""

import json
import subprocess
import sys

import pytest

from revflow.cli import main, read_tt_file, write_tt_file
from revflow.logicnet import TruthTable, read_pla, read_xmg
from revflow.revcirc import read_real

DESIGNS = ("intdiv", "newton")
METHODS = ("functional", "esop", "hier")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    out = json.loads(captured.out) if captured.out.strip() else None
    return code, out, captured.err


def gen_fmt(method):
    return "xmg" if method == "hier" else "pla"


@pytest.mark.parametrize("fmt,reader", [
    ("xmg", read_xmg), ("pla", read_pla), ("tt", read_tt_file),
])
def test_gen_formats_parse_back(tmp_path, capsys, fmt, reader):
    out = tmp_path / f"d.{fmt}"
    code, _, _ = run(capsys, "gen", "--design", "intdiv", "-n", "4",
                     "--format", fmt, "-o", str(out))
    assert code == 0
    assert out.read_text().startswith("# design=intdiv n=4")
    obj = reader(out)
    assert obj.num_inputs == 4


@pytest.mark.parametrize("design", DESIGNS)
@pytest.mark.parametrize("method", METHODS)
def test_gen_synth_verify_pipeline(tmp_path, capsys, design, method):
    fmt = gen_fmt(method)
    src = tmp_path / f"d.{fmt}"
    real = tmp_path / "d.real"
    assert run(capsys, "gen", "--design", design, "-n", "4",
               "--format", fmt, "-o", str(src))[0] == 0
    code, rec, _ = run(capsys, "synth", str(src), "--method", method, "-o", str(real))
    assert code == 0
    assert rec["design"] == design and rec["n"] == 4 and rec["method"] == method
    assert rec["qubits"] >= 7 and rec["gates"] > 0 and rec["runtime_s"] >= 0
    code, rec, _ = run(capsys, "verify", str(real), "--design", design, "-n", "4")
    assert code == 0
    assert rec["verified"] is True and rec["counterexample"] is None


def test_verify_catches_mutation(tmp_path, capsys):
    src, real = tmp_path / "d.pla", tmp_path / "d.real"
    run(capsys, "gen", "--design", "intdiv", "-n", "4", "--format", "pla",
        "-o", str(src))
    run(capsys, "synth", str(src), "--method", "esop", "-o", str(real))
    lines = real.read_text().splitlines()
    k = next(i for i, ln in enumerate(lines) if ln.startswith("t"))
    del lines[k]
    real.write_text("\n".join(lines) + "\n")
    code, rec, _ = run(capsys, "verify", str(real), "--design", "intdiv", "-n", "4")
    assert code == 1
    assert rec["verified"] is False
    cx = rec["counterexample"]
    assert cx["got"] != cx["want"] and 0 <= cx["x"] < 16


def test_verify_shape_mismatch_is_operational(tmp_path, capsys):
    src, real = tmp_path / "d.pla", tmp_path / "d.real"
    run(capsys, "gen", "--design", "intdiv", "-n", "4", "--format", "pla",
        "-o", str(src))
    run(capsys, "synth", str(src), "--method", "esop", "-o", str(real))
    code, _, err = run(capsys, "verify", str(real), "--design", "intdiv", "-n", "5")
    assert code == 2 and "inputs" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "synth", str(tmp_path / "nope.pla"),
                       "--method", "esop", "-o", str(tmp_path / "x.real"))
    assert code == 2 and err


def test_bad_width(capsys, tmp_path):
    code, _, err = run(capsys, "gen", "--design", "newton", "-n", "1",
                       "-o", str(tmp_path / "x.xmg"))
    assert code == 2 and err


def test_method_input_mismatch(tmp_path, capsys):
    src = tmp_path / "d.xmg"
    run(capsys, "gen", "--design", "intdiv", "-n", "4", "-o", str(src))
    code, _, err = run(capsys, "synth", str(src), "--method", "esop",
                       "-o", str(tmp_path / "x.real"))
    assert code == 2 and ".pla" in err
    src2 = tmp_path / "d.pla"
    run(capsys, "gen", "--design", "intdiv", "-n", "4", "--format", "pla",
        "-o", str(src2))
    code, _, err = run(capsys, "synth", str(src2), "--method", "hier",
                       "-o", str(tmp_path / "y.real"))
    assert code == 2 and ".xmg" in err


def test_stats_file_mode(tmp_path, capsys):
    src, real = tmp_path / "d.pla", tmp_path / "d.real"
    run(capsys, "gen", "--design", "intdiv", "-n", "4", "--format", "pla",
        "-o", str(src))
    _, rec, _ = run(capsys, "synth", str(src), "--method", "esop", "-o", str(real))
    _, stats, _ = run(capsys, "stats", str(real))
    assert stats["qubits"] == rec["qubits"]
    assert stats["t_count"] == rec["t_count"]
    assert stats["control_histogram"] == rec["control_histogram"]


def test_stats_cost_model_override(tmp_path, capsys):
    src, real = tmp_path / "d.pla", tmp_path / "d.real"
    run(capsys, "gen", "--design", "intdiv", "-n", "4", "--format", "pla",
        "-o", str(src))
    run(capsys, "synth", str(src), "--method", "esop", "-o", str(real))
    model = tmp_path / "costs.txt"
    model.write_text("# pricier doubly-controlled gates\n2: 9\n")
    _, base, _ = run(capsys, "stats", str(real))
    _, bump, _ = run(capsys, "stats", str(real), "--cost-model", str(model))
    assert bump["qubits"] == base["qubits"]
    assert bump["t_count"] == base["t_count"] + 2 * base["control_histogram"]["2"]


def test_stats_sweep(capsys):
    code = main(["stats", "--sweep", "4..6", "--design", "intdiv",
                 "--method", "esop"])
    out = capsys.readouterr().out
    assert code == 0
    rows = [json.loads(ln) for ln in out.splitlines() if ln.strip()]
    assert [r["n"] for r in rows] == [4, 5, 6]
    assert all(r["qubits"] == 2 * r["n"] for r in rows)


def test_sweep_requires_design_and_method(capsys):
    code = main(["stats", "--sweep", "4..5"])
    assert code == 2 and capsys.readouterr().err


def test_bad_sweep_range(capsys):
    code = main(["stats", "--sweep", "6..4", "--design", "intdiv",
                 "--method", "esop"])
    assert code == 2


def test_table_limit_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("REVFLOW_TT_LIMIT", "5")
    code, _, err = run(capsys, "gen", "--design", "intdiv", "-n", "8",
                       "--format", "tt", "-o", str(tmp_path / "big.tt"))
    assert code == 2 and "limit" in err.lower()
    monkeypatch.setenv("REVFLOW_TT_LIMIT", "banana")
    code, _, err = run(capsys, "gen", "--design", "intdiv", "-n", "4",
                       "--format", "tt", "-o", str(tmp_path / "small.tt"))
    assert code == 2


def test_tt_file_roundtrip(tmp_path):
    tt = TruthTable(3, 2, (0, 1, 2, 3, 3, 2, 1, 0))
    path = tmp_path / "t.tt"
    write_tt_file(tt, path)
    assert read_tt_file(path) == tt


def test_cnot_only_circuit_costs_zero_t(tmp_path, capsys):
    path = tmp_path / "c.real"
    path.write_text(
        ".version 2.0\n.numvars 2\n.variables a b\n.begin\nt2 a b\n.end\n")
    _, stats, _ = run(capsys, "stats", str(path))
    assert stats["t_count"] == 0 and stats["gate_count"] == 1


def test_module_entry_point(tmp_path):
    src = tmp_path / "d.pla"
    proc = subprocess.run(
        [sys.executable, "-m", "revflow", "gen", "--design", "intdiv", "-n", "4",
         "--format", "pla", "-o", str(src)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "revflow"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
