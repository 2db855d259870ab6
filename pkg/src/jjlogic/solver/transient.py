"""Quasi-static transient: a sequence of DC operating points.

Valid because every device model here is memoryless (unless an nTron card
enables latching, in which case results depend on timestep order).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..netlist import Circuit, ElementKind
from .dc import Solution, solve_dc

__all__ = ["Waveforms", "run_transient", "time_axis", "resolve_probes"]


@dataclass
class Waveforms:
    time: np.ndarray
    series: Dict[str, np.ndarray]
    probes: Tuple[str, ...]
    truncated: bool = False
    diagnostic: Optional[str] = None
    solutions: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.time)


def time_axis(step: float, stop: float) -> np.ndarray:
    """``0, step, 2*step, ...`` up to ``stop`` (inclusive within rounding)."""
    if not step > 0:
        raise ValueError("step must be > 0")
    if stop < step:
        raise ValueError("stop must be >= step")
    n = int(np.floor(stop / step * (1 + 1e-12))) + 1
    return np.arange(n) * step


def resolve_probes(circuit: Circuit, probes: Optional[Sequence[str]] = None) -> Tuple[str, ...]:
    """Normalize probe labels (``v(node)``/``i(elem)``) and check that they exist."""
    labels = list(probes) if probes else [p.label for p in circuit.prints]
    if not labels:
        raise ValueError("no probes: add a .print directive or pass probes explicitly")
    names = {e.name: e for e in circuit.elements}
    out = []
    for lab in labels:
        lab = lab.strip()
        kind, _, rest = lab.partition("(")
        kind = kind.lower()
        if not rest.endswith(")") or kind not in ("v", "i"):
            raise ValueError(f"malformed probe {lab!r}")
        target = rest[:-1]
        if kind == "v" and target not in circuit.nodes:
            raise ValueError(f"probe {lab!r}: no node {target!r}")
        if kind == "i":
            base, _, pin = target.partition(":")
            if base not in names or (pin and not (pin == "g" and names[base].kind is ElementKind.NTRON)):
                raise ValueError(f"probe {lab!r}: no element current {target!r}")
        out.append(f"{kind}({target})")
    return tuple(out)


def run_transient(
    circuit: Circuit, step: float, stop: float, probes: Optional[Sequence[str]] = None, *, warm_start: bool = True
) -> Waveforms:
    """Solve at every ``t`` in ``0, step, ..., stop``.

    Each solve starts from the previous timestep's device states unless
    ``warm_start`` is False.  A non-convergent timestep ends the sweep; the
    waveform keeps the points before it and records a diagnostic.
    """
    times = time_axis(step, stop)
    labels = resolve_probes(circuit, probes)
    data = {lab: [] for lab in labels}
    kept = []
    sols = []
    states = None
    diagnostic = None
    for t in times:
        sol: Solution = solve_dc(circuit, states if warm_start else None, float(t))
        if not sol.converged:
            diagnostic = f"non-convergent at t={float(t)!r}: " + "; ".join(sol.warnings)
            break
        kept.append(t)
        sols.append(sol)
        for lab in labels:
            data[lab].append(sol.probe(lab))
        states = sol.device_states
    return Waveforms(
        np.asarray(kept, dtype=float),
        {lab: np.asarray(vals, dtype=float) for lab, vals in data.items()},
        labels,
        diagnostic is not None,
        diagnostic,
        sols,
    )
