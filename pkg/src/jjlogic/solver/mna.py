"""Modified nodal analysis: stamping and the dense linear solve.

Unknowns are the non-ground node voltages followed by one branch current
per voltage source.  JJFETs and nTron channels stamp as resistors whose
value is selected by their discrete state; superconducting branches and the
nTron gate-to-channel short use a small resistive floor so the matrix stays
regular.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.linalg import LinAlgError

from ..devices import DeviceState, JjfetParams, NtronParams, jjfet_resistance
from ..netlist import Circuit, ElementKind
from . import _backend

__all__ = [
    "SUPERCONDUCTING_FLOOR",
    "SolverError",
    "SingularCircuitError",
    "LinearSystem",
    "assemble",
    "solve_linear",
    "initial_states",
    "floating_nodes",
]

SUPERCONDUCTING_FLOOR = 1e-3  # ohms
RESIDUAL_RTOL = 1e-12


class SolverError(RuntimeError):
    pass


class SingularCircuitError(SolverError):
    def __init__(self, nodes: Sequence[str] = ()):
        self.nodes = tuple(nodes)
        if self.nodes:
            msg = "singular MNA matrix: no DC path to ground from node(s) " + ", ".join(self.nodes)
        else:
            msg = "singular MNA matrix (voltage-source loop or degenerate circuit)"
        super().__init__(msg)


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    unknowns: Tuple[str, ...]
    floating_nodes: Tuple[str, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.rhs)


def floating_nodes(circuit: Circuit) -> Tuple[str, ...]:
    """Nodes with no conductive path to ground (current sources and JJFET gates don't count)."""
    parent = list(range(len(circuit.nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def join(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    idx = circuit.node_index
    for e in circuit.elements:
        if e.kind in (ElementKind.RESISTOR, ElementKind.VSOURCE):
            join(idx(e.nodes[0]), idx(e.nodes[1]))
        elif e.kind is ElementKind.JJFET:
            join(idx(e.nodes[0]), idx(e.nodes[1]))
        elif e.kind is ElementKind.NTRON:
            join(idx(e.nodes[0]), idx(e.nodes[1]))
            join(idx(e.nodes[2]), idx(e.nodes[1]))
    return tuple(n for i, n in enumerate(circuit.nodes) if find(i) != 0)


class CompiledCircuit:
    """Index arrays for one circuit topology; values can be overridden per solve."""

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        idx = circuit.node_index
        self.n_nodes = len(circuit.nodes)
        self.res, self.jj, self.nt, self.isrc, self.vsrc = [], [], [], [], []
        for e in circuit.elements:
            nodes = tuple(idx(n) for n in e.nodes)
            {
                ElementKind.RESISTOR: self.res,
                ElementKind.JJFET: self.jj,
                ElementKind.NTRON: self.nt,
                ElementKind.ISOURCE: self.isrc,
                ElementKind.VSOURCE: self.vsrc,
            }[e.kind].append((e, nodes))
        ip = np.intp
        self.res_g = np.array([1.0 / e.value for e, _ in self.res])
        self.g_a = np.array(
            [n[0] for _, n in self.res] + [n[0] for _, n in self.jj]
            + [n[0] for _, n in self.nt] + [n[2] for _, n in self.nt], dtype=ip,
        )
        self.g_b = np.array(
            [n[1] for _, n in self.res] + [n[1] for _, n in self.jj]
            + [n[1] for _, n in self.nt] + [n[1] for _, n in self.nt], dtype=ip,
        )
        self.i_a = np.array([n[0] for _, n in self.isrc], dtype=ip)
        self.i_b = np.array([n[1] for _, n in self.isrc], dtype=ip)
        self.v_a = np.array([n[0] for _, n in self.vsrc], dtype=ip)
        self.v_b = np.array([n[1] for _, n in self.vsrc], dtype=ip)
        self.jj_d = np.array([n[0] for _, n in self.jj], dtype=ip)
        self.jj_s = np.array([n[1] for _, n in self.jj], dtype=ip)
        self.jj_gate = np.array([n[2] for _, n in self.jj], dtype=ip)
        self.nt_p = np.array([n[0] for _, n in self.nt], dtype=ip)
        self.nt_n = np.array([n[1] for _, n in self.nt], dtype=ip)
        self.nt_gate = np.array([n[2] for _, n in self.nt], dtype=ip)
        self.floor_g = np.full(len(self.nt), 1.0 / SUPERCONDUCTING_FLOOR)
        self.devices = [e.name for e, _ in self.jj] + [e.name for e, _ in self.nt]
        self.unknowns = tuple(circuit.nodes[1:]) + tuple(f"I({e.name})" for e, _ in self.vsrc)
        self.floating = floating_nodes(circuit)
        self._slot = {}
        for k, (e, _) in enumerate(self.res):
            self._slot[e.name] = ("R", k)
        for k, (e, _) in enumerate(self.isrc):
            self._slot[e.name] = ("I", k)
        for k, (e, _) in enumerate(self.vsrc):
            self._slot[e.name] = ("V", k)

    def values(self, t: float, scale: float = 1.0, overrides: Optional[Mapping[str, float]] = None):
        """Resistor conductances and source levels at time ``t``."""
        res_g = self.res_g
        i_val = np.array([e.waveform.value(t) for e, _ in self.isrc])
        v_val = np.array([e.waveform.value(t) for e, _ in self.vsrc])
        if overrides:
            res_g = res_g.copy()
            for name, v in overrides.items():
                try:
                    kind, k = self._slot[name]
                except KeyError:
                    raise KeyError(f"no resistor or source named {name!r}") from None
                if kind == "R":
                    res_g[k] = 1.0 / v
                elif kind == "I":
                    i_val[k] = v
                else:
                    v_val[k] = v
        if scale != 1.0:
            i_val = i_val * scale
            v_val = v_val * scale
        return res_g, i_val, v_val

    def device_conductances(self, states: Sequence[DeviceState], v_prev: np.ndarray):
        nj = len(self.jj)
        g_jj = np.empty(nj)
        for k, (e, _) in enumerate(self.jj):
            p: JjfetParams = e.model
            v_gt = v_prev[self.jj_gate[k]] - p.v_t
            g_jj[k] = 1.0 / jjfet_resistance(v_gt, states[k], p)
        g_nt = np.empty(len(self.nt))
        for k, (e, _) in enumerate(self.nt):
            p: NtronParams = e.model
            if states[nj + k] is DeviceState.NTRON_RESISTIVE:
                g_nt[k] = 1.0 / p.r_channel
            elif states[nj + k] is DeviceState.NTRON_SUPERCONDUCTING:
                g_nt[k] = 1.0 / SUPERCONDUCTING_FLOOR
            else:
                raise ValueError(f"{e.name}: {states[nj + k].value} is not an nTron state")
        return g_jj, g_nt

    def stamp(self, states, v_prev, vals):
        res_g, i_val, v_val = vals
        g_jj, g_nt = self.device_conductances(states, v_prev)
        g_val = np.concatenate((res_g, g_jj, g_nt, self.floor_g))
        A, b = _backend.stamp(
            self.n_nodes, self.g_a, self.g_b, g_val, self.i_a, self.i_b, i_val,
            self.v_a, self.v_b, v_val,
        )
        return A, b, g_jj, g_nt


def compiled(circuit: Circuit) -> CompiledCircuit:
    comp = circuit.__dict__.get("_compiled")
    if comp is None:
        comp = CompiledCircuit(circuit)
        object.__setattr__(circuit, "_compiled", comp)
    return comp


def initial_states(circuit: Circuit) -> Dict[str, DeviceState]:
    """All JJFETs sub-gap, all nTrons superconducting."""
    out = {}
    for e in circuit.elements:
        if e.kind is ElementKind.JJFET:
            out[e.name] = DeviceState.JJFET_SUBGAP
        elif e.kind is ElementKind.NTRON:
            out[e.name] = DeviceState.NTRON_SUPERCONDUCTING
    return out


def _state_vector(comp: CompiledCircuit, states: Optional[Mapping[str, DeviceState]]):
    if states is None:
        states = initial_states(comp.circuit)
    try:
        return tuple(states[name] for name in comp.devices)
    except KeyError as exc:
        raise ValueError(f"no state given for device {exc.args[0]!r}") from None


def _voltage_vector(comp: CompiledCircuit, previous: Optional[Mapping[str, float]]):
    v = np.zeros(comp.n_nodes)
    if previous:
        for k, n in enumerate(comp.circuit.nodes):
            v[k] = previous.get(n, 0.0)
    return v


def assemble(
    circuit: Circuit,
    states: Optional[Mapping[str, DeviceState]] = None,
    t: float = 0.0,
    previous: Optional[Mapping[str, float]] = None,
) -> LinearSystem:
    """Stamp ``circuit`` for fixed device ``states`` at time ``t``.

    JJFET overdrive is read from ``previous`` (node name -> volts, the last
    iterate; missing nodes count as 0 V).
    """
    comp = compiled(circuit)
    sv = _state_vector(comp, states)
    v_prev = _voltage_vector(comp, previous)
    A, b, _, _ = comp.stamp(sv, v_prev, comp.values(t))
    return LinearSystem(A, b, comp.unknowns, comp.floating)


def _lu(A, b, floating):
    try:
        return _backend.lu_solve(A, b)
    except LinAlgError:
        raise SingularCircuitError(floating) from None


def solve_linear(system: LinearSystem) -> np.ndarray:
    """Solve the MNA system, with one step of iterative refinement if needed.

    Raises
    ------
    SingularCircuitError
        Naming any nodes that have no DC path to ground.
    """
    return _solve(system.matrix, system.rhs, system.floating_nodes)


def _solve(A, b, floating) -> np.ndarray:
    if floating:
        raise SingularCircuitError(floating)
    x = _lu(A, b, floating)
    bound = RESIDUAL_RTOL * max(1.0, float(np.abs(b).max()) if len(b) else 0.0)
    r = b - A @ x
    if len(r) and np.abs(r).max() > bound:
        x = x + _lu(A, r, floating)
    if not np.all(np.isfinite(x)):
        raise SingularCircuitError(floating)
    return x
