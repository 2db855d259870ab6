"""DC operating point by discrete device-state relaxation.

Each pass stamps the circuit for a fixed state vector, solves it exactly,
then re-evaluates every device's state condition on the new branch
quantities.  The loop stops at a fixed point, on a detected state cycle, or
at the iteration cap (after one source-stepping attempt).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..devices import (
    DeviceState,
    jjfet_resistance,
    jjfet_state_condition,
    ntron_state_condition,
)
from ..netlist import GROUND, Circuit, ElementKind
from .mna import SUPERCONDUCTING_FLOOR, _solve, _state_vector, _voltage_vector, compiled

__all__ = ["Solution", "solve_dc", "kcl_residual", "state_violations", "VOLTAGE_TOL", "MAX_ITER"]

VOLTAGE_TOL = 1e-9
MAX_ITER = 100
SOURCE_STEPS = 10


@dataclass(frozen=True)
class Solution:
    node_voltages: Dict[str, float]
    branch_currents: Dict[str, float]
    device_states: Dict[str, DeviceState]
    converged: bool
    iterations: int
    residual: float
    time: float = 0.0
    warnings: Tuple[str, ...] = ()
    last_states: Optional[Tuple[Dict[str, DeviceState], Dict[str, DeviceState]]] = None

    def v(self, node: str) -> float:
        return self.node_voltages[node]

    def i(self, element: str) -> float:
        return self.branch_currents[element]

    def probe(self, label: str) -> float:
        kind, _, rest = label.partition("(")
        target = rest.rstrip(")")
        if kind.lower() == "v":
            return self.node_voltages[target]
        if kind.lower() == "i":
            return self.branch_currents[target]
        raise KeyError(label)


@dataclass
class _Pass:
    states: tuple
    v_prev: np.ndarray
    x: np.ndarray
    v: np.ndarray
    g_jj: np.ndarray
    g_nt: np.ndarray


def _one_pass(comp, states, v_prev, vals) -> _Pass:
    A, b, g_jj, g_nt = comp.stamp(states, v_prev, vals)
    x = _solve(A, b, comp.floating)
    v = np.concatenate(([0.0], x[: comp.n_nodes - 1]))
    return _Pass(states, v_prev, x, v, g_jj, g_nt)


def _next_states(comp, p: _Pass) -> tuple:
    v = p.v
    nj = len(comp.jj)
    out = []
    i_jj = p.g_jj * (v[comp.jj_d] - v[comp.jj_s])
    for k, (e, _) in enumerate(comp.jj):
        v_gt = v[comp.jj_gate[k]] - e.model.v_t
        out.append(jjfet_state_condition(float(i_jj[k]), float(v_gt), e.model))
    i_ch = p.g_nt * (v[comp.nt_p] - v[comp.nt_n])
    i_g = comp.floor_g * (v[comp.nt_gate] - v[comp.nt_n])
    for k, (e, _) in enumerate(comp.nt):
        out.append(ntron_state_condition(float(i_ch[k]), float(i_g[k]), p.states[nj + k], e.model))
    return tuple(out)


def _power(comp, p: _Pass, vals) -> float:
    v = p.v
    g = np.concatenate((vals[0], p.g_jj, p.g_nt, comp.floor_g))
    dv = v[comp.g_a] - v[comp.g_b]
    return float(np.sum(g * dv * dv))


def _gate_dv(comp, a: np.ndarray, b: np.ndarray) -> float:
    if not len(comp.jj_gate):
        return 0.0
    return float(np.abs(a[comp.jj_gate] - b[comp.jj_gate]).max())


@dataclass
class _Outcome:
    final: _Pass
    converged: bool
    iterations: int
    warnings: List[str] = field(default_factory=list)
    last_two: Optional[Tuple[tuple, tuple]] = None
    cycled: bool = False


def _relax(comp, states, v_prev, vals, max_iter) -> _Outcome:
    seen: Dict[tuple, int] = {}
    trail: List[_Pass] = []
    polished = False
    for it in range(max_iter):
        key = (states, tuple(v_prev[comp.jj_gate].tolist()))
        if key in seen:
            members = trail[seen[key]:]
            powers = [_power(comp, m, vals) for m in members]
            best = members[int(np.argmin(powers))]
            final = _one_pass(comp, best.states, best.v_prev, vals)
            msg = (
                f"device-state cycle of length {len(members)} detected; "
                f"reporting the minimum-dissipation member ({min(powers):.6g} W)"
            )
            return _Outcome(final, False, it + 1, [msg], (trail[-2].states if len(trail) > 1 else states, trail[-1].states), True)
        seen[key] = it
        p = _one_pass(comp, states, v_prev, vals)
        trail.append(p)
        nxt = _next_states(comp, p)
        if nxt == states:
            dv = _gate_dv(comp, p.v, v_prev)
            if dv == 0.0 or (polished and dv < VOLTAGE_TOL):
                return _Outcome(p, True, it + 1)
            if dv < VOLTAGE_TOL:
                polished = True
        states, v_prev = nxt, p.v
    last_two = (trail[-2].states if len(trail) > 1 else trail[-1].states, trail[-1].states)
    return _Outcome(trail[-1], False, max_iter, [f"no fixed point after {max_iter} iterations"], last_two)


def _named(comp, sv) -> Dict[str, DeviceState]:
    return dict(zip(comp.devices, sv))


def _build_solution(circuit, comp, out: _Outcome, vals, t) -> Solution:
    p = out.final
    v = p.v
    nodes = {n: float(v[k]) for k, n in enumerate(circuit.nodes)}
    currents: Dict[str, float] = {}
    res_g, i_val, v_val = vals
    jk = nk = rk = ik = vk = 0
    nn = comp.n_nodes - 1
    for e, idx in _element_order(comp):
        if e.kind is ElementKind.RESISTOR:
            currents[e.name] = float(res_g[rk] * (v[idx[0]] - v[idx[1]]))
            rk += 1
        elif e.kind is ElementKind.JJFET:
            currents[e.name] = float(p.g_jj[jk] * (v[idx[0]] - v[idx[1]]))
            jk += 1
        elif e.kind is ElementKind.NTRON:
            currents[e.name] = float(p.g_nt[nk] * (v[idx[0]] - v[idx[1]]))
            currents[e.name + ":g"] = float(comp.floor_g[nk] * (v[idx[2]] - v[idx[1]]))
            nk += 1
        elif e.kind is ElementKind.ISOURCE:
            currents[e.name] = float(i_val[ik])
            ik += 1
        else:
            currents[e.name] = float(p.x[nn + vk])
            vk += 1
    # report elements in netlist order
    ordered = {}
    for e in circuit.elements:
        ordered[e.name] = currents[e.name]
        if e.kind is ElementKind.NTRON:
            ordered[e.name + ":g"] = currents[e.name + ":g"]
    sol = Solution(
        nodes, ordered, _named(comp, p.states), out.converged, out.iterations, 0.0, t,
        tuple(out.warnings),
        None if out.last_two is None else (_named(comp, out.last_two[0]), _named(comp, out.last_two[1])),
    )
    object.__setattr__(sol, "residual", kcl_residual(circuit, sol))
    return sol


def _element_order(comp):
    for group in (comp.res, comp.jj, comp.nt, comp.isrc, comp.vsrc):
        yield from group


_observers = []


def add_observer(fn) -> None:
    """Register ``fn(circuit, solution)`` to be called after every DC solve."""
    _observers.append(fn)


def remove_observer(fn) -> None:
    _observers.remove(fn)


def solve_dc(
    circuit: Circuit,
    initial_states: Optional[Mapping[str, DeviceState]] = None,
    t: float = 0.0,
    *,
    values: Optional[Mapping[str, float]] = None,
    max_iter: int = MAX_ITER,
) -> Solution:
    """Operating point of ``circuit`` at time ``t``.

    Parameters
    ----------
    initial_states : mapping, optional
        Device name -> starting state.  Defaults to all JJFETs sub-gap and
        all nTrons superconducting.
    values : mapping, optional
        Element name -> replacement resistance or DC source level, applied
        without rebuilding the circuit.

    Returns
    -------
    Solution
        ``converged`` is False after a state cycle (the minimum-dissipation
        member is reported) or when no fixed point was found even with
        source stepping; ``last_states`` then holds the last two state vectors.

    Raises
    ------
    SingularCircuitError
        If some node has no DC path to ground.
    """
    comp = compiled(circuit)
    states = _state_vector(comp, initial_states)
    v0 = _voltage_vector(comp, None)
    vals = comp.values(t, 1.0, values)
    out = _relax(comp, states, v0, vals, max_iter)
    if not out.converged and not out.cycled:
        total = out.iterations
        st, vp = states, v0
        for k in range(1, SOURCE_STEPS + 1):
            step = _relax(comp, st, vp, comp.values(t, k / SOURCE_STEPS, values), max_iter)
            total += step.iterations
            st, vp = step.final.states, step.final.v
        if step.converged:
            step.iterations = total
            step.warnings = ["converged only after source stepping"]
            out = step
        else:
            out.iterations = total
            out.warnings.append("source stepping did not reach a fixed point")
    effective = circuit.with_values(values) if values else circuit
    sol = _build_solution(effective, comp, out, vals, t)
    for fn in _observers:
        fn(effective, sol)
    return sol


def kcl_residual(circuit: Circuit, solution: Solution) -> float:
    """Largest net current at any non-ground node.

    Device currents are recomputed from node voltages and device equations;
    only voltage-source currents are taken from ``solution``.  Source levels
    are evaluated at ``solution.time``.
    """
    v = solution.node_voltages
    net = {n: 0.0 for n in circuit.nodes}
    states = solution.device_states

    def leave(a, b, i):
        net[a] += i
        net[b] -= i

    for e in circuit.elements:
        n = e.nodes
        if e.kind is ElementKind.RESISTOR:
            leave(n[0], n[1], (v[n[0]] - v[n[1]]) / e.value)
        elif e.kind is ElementKind.JJFET:
            r = jjfet_resistance(v[n[2]] - e.model.v_t, states[e.name], e.model)
            leave(n[0], n[1], (v[n[0]] - v[n[1]]) / r)
        elif e.kind is ElementKind.NTRON:
            if states[e.name] is DeviceState.NTRON_RESISTIVE:
                r = e.model.r_channel
            else:
                r = SUPERCONDUCTING_FLOOR
            leave(n[0], n[1], (v[n[0]] - v[n[1]]) / r)
            leave(n[2], n[1], (v[n[2]] - v[n[1]]) / SUPERCONDUCTING_FLOOR)
        elif e.kind is ElementKind.ISOURCE:
            leave(n[0], n[1], e.waveform.value(solution.time))
        elif e.kind is ElementKind.VSOURCE:
            leave(n[0], n[1], solution.branch_currents[e.name])
    return max((abs(i) for n, i in net.items() if n != GROUND), default=0.0)


def state_violations(circuit: Circuit, solution: Solution) -> List[str]:
    """Devices whose stored state differs from the state condition re-evaluated on the solution."""
    v = solution.node_voltages
    bad = []
    for e in circuit.elements:
        if e.kind is ElementKind.JJFET:
            want = jjfet_state_condition(solution.branch_currents[e.name], v[e.nodes[2]] - e.model.v_t, e.model)
        elif e.kind is ElementKind.NTRON:
            want = ntron_state_condition(
                solution.branch_currents[e.name], solution.branch_currents[e.name + ":g"],
                solution.device_states[e.name], e.model,
            )
        else:
            continue
        if want is not solution.device_states[e.name]:
            bad.append(e.name)
    return bad
