"""Exhaustive truth-table evaluation of a solved circuit."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from ..netlist import GROUND, Circuit, CircuitElement, ElementKind, SourceWaveform
from ..solver import solve_dc
from .gates import LogicLevels, gate_function

__all__ = [
    "classify_level",
    "TruthRow",
    "TruthTableReport",
    "truth_table",
    "maj3_reconfigure",
]


def classify_level(v: float, levels: LogicLevels = LogicLevels()) -> str:
    """``"1"`` at or above ``high_min``, ``"0"`` at or below ``low_max``, else ``"X"``."""
    if v >= levels.high_min:
        return "1"
    if v <= levels.low_max:
        return "0"
    return "X"


@dataclass(frozen=True)
class TruthRow:
    inputs: Tuple[int, ...]
    input_voltages: Tuple[float, ...]
    output_voltage: float
    level: str
    expected: int
    passed: bool
    converged: bool
    noise_margin: float
    diagnostic: str = ""

    def to_dict(self) -> dict:
        return {
            "inputs": list(self.inputs),
            "input_voltages": list(self.input_voltages),
            "output_voltage": self.output_voltage,
            "level": self.level,
            "expected": self.expected,
            "pass": self.passed,
            "converged": self.converged,
            "noise_margin": self.noise_margin,
            "diagnostic": self.diagnostic,
        }


@dataclass
class TruthTableReport:
    inputs: Tuple[str, ...]
    output: str
    rows: List[TruthRow]
    levels: LogicLevels = field(default_factory=LogicLevels)
    fixed: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.rows)

    @property
    def worst_noise_margin(self) -> float:
        return min(r.noise_margin for r in self.rows)

    def to_dict(self) -> dict:
        lv = self.levels
        return {
            "inputs": list(self.inputs),
            "output": self.output,
            "fixed": dict(self.fixed),
            "levels": {"v_low": lv.v_low, "v_high": lv.v_high, "low_max": lv.low_max, "high_min": lv.high_min},
            "pass": self.passed,
            "converged": self.converged,
            "worst_noise_margin": self.worst_noise_margin,
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def format_table(self) -> str:
        head = " ".join(self.inputs) + f" | {self.output:>10} lvl exp ok"
        lines = [head]
        for r in self.rows:
            bits = " ".join(f"{b:>{len(n)}}" for b, n in zip(r.inputs, self.inputs))
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"{bits} | {r.output_voltage:10.6f}   {r.level}   {r.expected} {mark}")
        return "\n".join(lines)


def _drivers(circuit: Circuit, nodes: Sequence[str]) -> Tuple[Circuit, Dict[str, str]]:
    """Find (or add) a ground-referenced DC voltage source on every driven node."""
    names = {}
    extra = []
    taken = {e.name for e in circuit.elements}
    for n in nodes:
        if n not in circuit.nodes or n == GROUND:
            raise ValueError(f"no such non-ground node {n!r}")
        found = [
            e.name for e in circuit.elements
            if e.kind is ElementKind.VSOURCE and e.nodes == (n, GROUND)
        ]
        if found:
            names[n] = found[0]
            continue
        name = f"VTT_{n}".replace(".", "_")
        while name in taken:
            name += "_"
        taken.add(name)
        extra.append(CircuitElement(name, ElementKind.VSOURCE, (n, GROUND), waveform=SourceWaveform("DC", 0.0)))
        names[n] = name
    return (circuit.replace_elements(extra=extra) if extra else circuit), names


def truth_table(
    circuit: Circuit,
    inputs: Sequence[str],
    output: str,
    levels: LogicLevels = LogicLevels(),
    expected: Optional[Callable[[Sequence[bool]], bool]] = None,
    fixed: Optional[Mapping[str, int]] = None,
) -> TruthTableReport:
    """Solve the operating point for every input combination.

    Inputs are driven by the ground-referenced DC voltage source already on
    that node, or by a new one.  ``fixed`` pins further nodes to a constant
    bit.  ``expected`` maps the input bits to the wanted output bit; when
    omitted every row is reported with level classification only and
    ``passed`` requires just a defined level.
    """
    fixed = dict(fixed or {})
    inputs = tuple(inputs)
    if output not in circuit.nodes:
        raise ValueError(f"no such node {output!r}")
    driven, src = _drivers(circuit, inputs + tuple(fixed))
    pinned = {src[n]: levels.voltage(b) for n, b in fixed.items()}
    rows = []
    for bits in itertools.product((0, 1), repeat=len(inputs)):
        volts = tuple(levels.voltage(b) for b in bits)
        values = dict(pinned)
        values.update({src[n]: v for n, v in zip(inputs, volts)})
        sol = solve_dc(driven, values=values)
        vout = sol.v(output)
        level = classify_level(vout, levels)
        want = int(bool(expected(tuple(bool(b) for b in bits)))) if expected else -1
        if want == 1:
            margin = vout - levels.high_min
        elif want == 0:
            margin = levels.low_max - vout
        else:
            margin = max(vout - levels.high_min, levels.low_max - vout)
        ok = sol.converged and level != "X" and (want < 0 or level == str(want))
        diag = "; ".join(sol.warnings)
        rows.append(TruthRow(bits, volts, vout, level, want, ok, sol.converged, margin, diag))
    return TruthTableReport(inputs, output, rows, levels, fixed)


def maj3_reconfigure(fixed_value: int) -> Callable[[Sequence[bool]], bool]:
    """Two-input function a MAJ3 computes with its third input tied to ``fixed_value``.

    Tied low it is AND2, tied high it is OR2.
    """
    maj = gate_function("MAJ3")
    fixed_value = int(bool(fixed_value))

    def f(bits):
        return maj((bits[0], bits[1], fixed_value))

    f.__name__ = "OR2" if fixed_value else "AND2"
    return f
