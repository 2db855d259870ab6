import numpy as np
import pytest

from jjlogic.netlist import elaborate, parse, parse_file
from jjlogic.solver import resolve_probes, run_transient, solve_dc, time_axis

from oracles import FIXTURES


def test_time_axis():
    t = time_axis(1e-9, 200e-9)
    assert len(t) == 201 and t[0] == 0.0 and t[-1] == pytest.approx(200e-9)
    assert np.all(np.diff(t) > 0)
    with pytest.raises(ValueError):
        time_axis(0.0, 1.0)
    with pytest.raises(ValueError):
        time_axis(2.0, 1.0)


def test_dc_only_is_constant():
    c = elaborate(parse("I1 0 a DC 35u\nR1 a 0 20k\n.print v(a) i(R1)\n"))
    w = run_transient(c, 1e-9, 10e-9)
    op = solve_dc(c)
    assert np.all(w.series["v(a)"] == op.v("a"))
    assert np.all(w.series["i(R1)"] == op.i("R1"))


def test_not_gate_inverts_every_plateau():
    c = elaborate(parse_file(FIXTURES / "not_pulse.net"))
    w = run_transient(c, 1e-9, 200e-9)
    vin, vout = w.series["v(in)"], w.series["v(out)"]
    high = vin >= -1e-12
    low = vin <= -0.7 + 1e-12
    assert high.sum() > 50 and low.sum() > 50
    assert np.all(np.abs(vout[high] + 0.7) < 1e-6)
    assert np.all(np.abs(vout[low]) < 1e-6)


def test_warm_and_cold_agree():
    c = elaborate(parse_file(FIXTURES / "not_pulse.net"))
    warm = run_transient(c, 2e-9, 200e-9)
    cold = run_transient(c, 2e-9, 200e-9, warm_start=False)
    assert np.array_equal(warm.series["v(out)"], cold.series["v(out)"])


def test_truncates_on_nonconvergence():
    c = elaborate(parse_file(FIXTURES / "cycle.net"), base_dir=FIXTURES)
    w = run_transient(c, 1.0, 3.0)
    assert w.truncated and len(w) == 0
    assert "t=0.0" in w.diagnostic and "cycle" in w.diagnostic


def test_probes():
    c = elaborate(parse_file(FIXTURES / "hierarchy.net"))
    assert resolve_probes(c) == ("v(out)", "v(XA.m)", "i(V1)")
    assert resolve_probes(c, ["V(out)", "i(XA.R3)"]) == ("v(out)", "i(XA.R3)")
    for bad in ["v(nowhere)", "i(R99)", "x(out)", "i(V1:g)"]:
        with pytest.raises(ValueError):
            resolve_probes(c, [bad])
    with pytest.raises(ValueError):
        resolve_probes(elaborate(parse("R1 a 0 1\n")))


def test_pulse_source_drives_hierarchy():
    c = elaborate(parse_file(FIXTURES / "hierarchy.net"))
    w = run_transient(c, 0.5e-9, 20e-9, ["i(I9)"])
    assert w.series["i(I9)"].max() == pytest.approx(1e-6)
    assert w.series["i(I9)"][0] == 0.0
