import json
import shutil
import subprocess
import sys

import pytest

from jjlogic.cli import main
from jjlogic.netlist import parse

from oracles import FIXTURES


def run(*args):
    return main([*map(str, args), "--no-banner"])


def test_op_ohm(capsys):
    assert run("op", FIXTURES / "ohm.net") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["node_voltages"]["a"] == pytest.approx(0.7, rel=1e-15)
    assert data["converged"] is True


def test_op_floating(capsys):
    assert run("op", FIXTURES / "floating.net") == 1
    assert "b" in capsys.readouterr().err


def test_op_cycle(capsys):
    assert run("op", FIXTURES / "cycle.net") == 2
    out = capsys.readouterr()
    assert json.loads(out.out)["converged"] is False
    assert "cycle" in out.err


def test_op_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.net"
    bad.write_text("R1 a 0 1k\nJ1 d 0 g\n")
    assert run("op", bad) == 1
    assert "line 2" in capsys.readouterr().err


def test_missing_file(capsys):
    assert run("op", "/nonexistent/x.net") == 1


def test_usage_error_is_input_error(capsys):
    for argv in (["op"], ["frobnicate"], ["tune", "--gate", "nand2", "--points", "x"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1


def test_card_search_path(tmp_path, capsys):
    shutil.copy(FIXTURES / "cycle.net", tmp_path / "cycle.net")
    assert run("op", tmp_path / "cycle.net") == 1
    assert "cycle_jjfet.card" in capsys.readouterr().err
    assert run("op", tmp_path / "cycle.net", "--card", FIXTURES) == 2


def test_tran_not_gate(capsys):
    assert run("tran", FIXTURES / "not_pulse.net", "--step", "1e-9", "--stop", "200e-9") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "time,v(in),v(out)" and len(lines) == 202
    for line in lines[1:]:
        _, vin, vout = map(float, line.split(","))
        if vin == 0.0:
            assert vout == pytest.approx(-0.7, abs=1e-6)
        elif vin == -0.7:
            assert vout == pytest.approx(0.0, abs=1e-6)


def test_tran_uses_directive(capsys):
    assert run("tran", FIXTURES / "hierarchy.net") == 0
    assert len(capsys.readouterr().out.splitlines()) == 22


def test_tran_dc_constant(capsys):
    assert run("tran", FIXTURES / "ohm.net", "--step", "1", "--stop", "3") == 0
    rows = [l.split(",")[1:] for l in capsys.readouterr().out.splitlines()[1:]]
    assert all(r == rows[0] for r in rows)


def test_tran_bad_window(capsys):
    assert run("tran", FIXTURES / "ohm.net", "--step", "2", "--stop", "1") == 1


def test_tran_truncated(capsys):
    assert run("tran", FIXTURES / "cycle.net", "--step", "1", "--stop", "2") == 2


def test_tune_then_truthtable(tmp_path, capsys):
    bias = tmp_path / "nand.json"
    assert run("tune", "--gate", "nand2", "-o", bias) == 0
    assert json.loads(bias.read_text())["feasible"] is True
    assert run("truthtable", "--gate", "nand2", "--bias", bias) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pass"] and [r["level"] for r in rep["rows"]] == ["1", "1", "1", "0"]


def test_tune_synthetic(tmp_path, capsys):
    card = FIXTURES / "synthetic_jjfet.card"
    bias = tmp_path / "b.json"
    args = ["--jjfet-card", card, "--margin", "1e-7", "--ibias1-range", "10e-6", "11e-6", "--rs-range", "1", "1e3"]
    assert run("tune", "--gate", "not", *args, "-o", bias) == 0
    assert run("truthtable", "--gate", "not", "--jjfet-card", card, "--bias", bias) == 0


def test_tune_infeasible(capsys):
    assert run("tune", "--gate", "maj3", "--jjfet-card", FIXTURES / "flat_jjfet.card") == 4
    out = capsys.readouterr()
    assert json.loads(out.out)["feasible"] is False
    assert "MAJ3_CORE" in out.err


def test_truthtable_autotunes(capsys):
    assert run("truthtable", "--gate", "maj3") == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 8


def test_truthtable_infeasible_autotune(capsys):
    assert run("truthtable", "--gate", "not", "--jjfet-card", FIXTURES / "flat_jjfet.card") == 4


def test_truthtable_logic_failure(capsys):
    assert run("truthtable", FIXTURES / "gate_nand2.net", "--inputs", "in1", "in2",
               "--output-node", "out", "--expect", "nor2") == 3


def test_truthtable_fix(capsys):
    assert run("truthtable", "--gate", "maj3", "--fix", "in1=0") == 0
    rep = json.loads(capsys.readouterr().out)
    assert [r["level"] for r in rep["rows"]] == ["0", "0", "0", "1"]
    assert run("truthtable", "--gate", "maj3", "--fix", "in1=2") == 1


def test_emit_not_reparses(tmp_path, capsys):
    out = tmp_path / "not.net"
    assert run("emit-gate", "--gate", "not", "-o", out) == 0
    ast = parse(out.read_text())
    assert ast.analyses and ast.prints
    assert run("op", out) == 0


def test_emit_roundtrip_identical_report(tmp_path, capsys):
    bias, net = tmp_path / "b.json", tmp_path / "x.net"
    assert run("tune", "--gate", "xor2", "-o", bias) == 0
    assert run("emit-gate", "--gate", "xor2", "--bias", bias, "-o", net) == 0
    assert sum(1 for l in net.read_text().splitlines() if l.startswith("X")) >= 3
    a, b = tmp_path / "a.json", tmp_path / "b2.json"
    assert run("truthtable", "--gate", "xor2", "--bias", bias, "-o", a) == 0
    assert run("truthtable", net, "--inputs", "in1", "in2", "--output-node", "out", "--expect", "xor2", "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bias_file_forms(tmp_path, capsys):
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps({"i_bias1": 6.8e-5, "r_s": 14678.0}))
    assert run("truthtable", "--gate", "not", "--bias", bare) == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"feasible": False, "bias": {"i_bias1": 1, "r_s": 1}}))
    assert run("truthtable", "--gate", "not", "--bias", bad) == 1
    swing = tmp_path / "swing.json"
    swing.write_text(json.dumps({"i_bias1": 6.8e-5, "r_s": 14678.0, "i_bias2": 3e-5}))
    assert run("truthtable", "--gate", "not", "--bias", swing) == 1


def test_byte_identical_and_banner(tmp_path):
    cmd = [sys.executable, "-m", "jjlogic.cli", "op", str(FIXTURES / "gate_maj3.net")]
    a = subprocess.run(cmd + ["--no-banner"], capture_output=True, text=True)
    b = subprocess.run(cmd + ["--no-banner"], capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stderr == ""
    c = subprocess.run(cmd, capture_output=True, text=True)
    assert c.stdout == a.stdout and c.stderr.startswith("jjlogic ")
