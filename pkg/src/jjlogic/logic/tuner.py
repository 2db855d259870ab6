"""Grid search for gate bias points.

Every single-nTron stage is tuned on its own: inputs are driven at the
ideal logic levels and, for each grid point, the nTron gate current of every
input row is compared with the switching threshold ``I_G*`` at which
``i_sw(I_G*) = i_bias2``.  The stage margin is the worst row's distance
from the threshold on the correct side; the grid point maximising it wins
(first in grid order on ties).  Composite gates tune each constituent stage
and are then checked as a whole with an exhaustive truth table.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from ..cards import default_jjfet, default_ntron
from ..devices import JjfetParams, NtronParams, ntron_gate_threshold
from ..netlist import elaborate
from ..solver import solve_dc
from .gates import (
    GateBias,
    GateKind,
    LogicLevels,
    build_testbench,
    gate_function,
    gate_ports,
    stage_switches,
)
from .truth import TruthTableReport, classify_level, truth_table

__all__ = ["TuneGrid", "StageTune", "TuneResult", "tune_bias", "tune_stage", "DEFAULT_MARGIN"]

DEFAULT_MARGIN = 0.5e-6

_STAGES_OF = {
    "MAJ3": ("MAJ3_CORE", "NOT"),
    "XOR2": ("NOT", "NAND2", "NOR2"),
}


@dataclass(frozen=True)
class TuneGrid:
    """Log-spaced search ranges, ``points`` samples per axis."""

    i_bias1: Tuple[float, float] = (1e-6, 100e-6)
    r_s: Tuple[float, float] = (100.0, 1e6)
    r_p: Tuple[float, float] = (100.0, 1e6)
    points: int = 25

    def axis(self, name: str) -> Tuple[float, ...]:
        lo, hi = getattr(self, name)
        return tuple(float(x) for x in np.geomspace(lo, hi, self.points))


@dataclass(frozen=True)
class StageTune:
    stage: str
    bias: GateBias
    worst_margin: float
    row_margins: Tuple[Tuple[Tuple[int, ...], float], ...]
    threshold: float
    evaluated: int
    required: float

    @property
    def feasible(self) -> bool:
        return self.worst_margin >= self.required

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "feasible": self.feasible,
            "bias": self.bias.to_dict(),
            "worst_margin": _finite(self.worst_margin),
            "gate_threshold": self.threshold,
            "grid_points": self.evaluated,
            "rows": [{"inputs": list(k), "margin": _finite(m)} for k, m in self.row_margins],
        }


@dataclass
class TuneResult:
    gate: str
    bias: GateBias
    stages: List[StageTune]
    margin: float
    verification: Optional[TruthTableReport] = None

    @property
    def worst_margin(self) -> float:
        return min(s.worst_margin for s in self.stages)

    @property
    def feasible(self) -> bool:
        ok = all(s.feasible for s in self.stages)
        return ok and (self.verification is None or self.verification.passed)

    def to_dict(self) -> dict:
        d = {
            "gate": self.gate,
            "feasible": self.feasible,
            "required_margin": self.margin,
            "worst_margin": _finite(self.worst_margin),
            "bias": self.bias.to_dict(),
            "stages": [s.to_dict() for s in self.stages],
        }
        if self.verification is not None:
            d["verification"] = self.verification.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def explain(self) -> str:
        """Human-readable infeasibility summary naming the failing rows."""
        lines = []
        for s in self.stages:
            if not s.feasible:
                bad = [f"{''.join(map(str, k))}:{m * 1e6:+.3f}uA" for k, m in s.row_margins if m < s.required]
                lines.append(
                    f"{s.stage}: best worst-case margin {s.worst_margin * 1e6:.3f} uA < "
                    f"{s.required * 1e6:.3f} uA; rows below margin {', '.join(bad)}"
                )
        if self.verification is not None and not self.verification.passed:
            bad = ["".join(map(str, r.inputs)) for r in self.verification.rows if not r.passed]
            lines.append(f"{self.gate}: composite truth table fails on rows {', '.join(bad)}")
        return "\n".join(lines)


def _row_margin(sol, switch: bool, threshold: float, levels: LogicLevels) -> float:
    if not sol.converged:
        return -math.inf
    ig = abs(sol.i("XG.N1:g"))
    m = ig - threshold if switch else threshold - ig
    if classify_level(sol.v("out"), levels) != ("1" if switch else "0"):
        m = -abs(m)
    return m


def _finite(x: float):
    return x if math.isfinite(x) else None


@lru_cache(maxsize=64)
def _tune_stage_cached(stage, jjfet, ntron, margin, grid, levels) -> StageTune:
    i_bias2 = levels.swing / ntron.r_channel
    threshold = ntron_gate_threshold(i_bias2, ntron)
    ins, _ = gate_ports(stage)
    place = GateBias(1e-6, 1e3, i_bias2, levels.v_low, 1e3 if stage == "COPY" else None)
    circuit = elaborate(build_testbench(stage, place, None, levels), models={"JJ": jjfet, "NT": ntron})
    rows = list(itertools.product((0, 1), repeat=len(ins)))
    drive = [{f"VIN_{p}": levels.voltage(b) for p, b in zip(ins, bits)} for bits in rows]
    wants = [stage_switches(stage, [bool(b) for b in bits]) for bits in rows]
    rp_axis = grid.axis("r_p") if stage == "COPY" else (None,)
    best = None
    evaluated = 0
    order = list(range(len(rows)))
    for ib, rs, rp in itertools.product(grid.axis("i_bias1"), grid.axis("r_s"), rp_axis):
        evaluated += 1
        knobs = {"XG.IB1": ib, "XG.RS": rs}
        if rp is not None:
            knobs["XG.RP"] = rp
        margins = [math.inf] * len(rows)
        worst = math.inf
        for r in order:
            m = _row_margin(solve_dc(circuit, values={**knobs, **drive[r]}), wants[r], threshold, levels)
            margins[r] = m
            if m < worst:
                worst, worst_row = m, r
            if best is not None and worst <= best[0]:
                break  # cannot beat the incumbent
        # try the row that limited this point first next time; prunes most points after one solve
        order.remove(worst_row)
        order.insert(0, worst_row)
        if best is None or worst > best[0]:
            best = (worst, (ib, rs, rp), margins)
    worst, (ib, rs, rp), margins = best
    bias = GateBias(ib, rs, i_bias2, levels.v_low, rp)
    return StageTune(stage, bias, worst, tuple(zip(rows, margins)), threshold, evaluated, margin)


def tune_stage(
    stage: str,
    jjfet: Optional[JjfetParams] = None,
    ntron: Optional[NtronParams] = None,
    margin: float = DEFAULT_MARGIN,
    grid: TuneGrid = TuneGrid(),
    levels: LogicLevels = LogicLevels(),
) -> StageTune:
    return _tune_stage_cached(
        stage, jjfet or default_jjfet(), ntron or default_ntron(), float(margin), grid, levels
    )


def tune_bias(
    kind,
    jjfet: Optional[JjfetParams] = None,
    ntron: Optional[NtronParams] = None,
    margin: float = DEFAULT_MARGIN,
    grid: TuneGrid = TuneGrid(),
    levels: LogicLevels = LogicLevels(),
) -> TuneResult:
    """Bias point for gate ``kind`` with at least ``margin`` amperes of gate-current margin.

    Check ``result.feasible``; when it is False, ``result.explain()`` names
    the stages and input rows that could not reach the margin.
    """
    if not margin > 0:
        raise ValueError("margin must be > 0")
    name = kind.value if isinstance(kind, GateKind) else GateKind.parse(kind).value
    jjfet = jjfet or default_jjfet()
    ntron = ntron or default_ntron()
    if name not in _STAGES_OF:
        st = tune_stage(name, jjfet, ntron, margin, grid, levels)
        return TuneResult(name, st.bias, [st], margin)
    stages = [tune_stage(s, jjfet, ntron, margin, grid, levels) for s in _STAGES_OF[name]]
    top = stages[0].bias
    bias = GateBias(top.i_bias1, top.r_s, top.i_bias2, top.v_bias, top.r_p, tuple((s.stage, s.bias) for s in stages))
    result = TuneResult(name, bias, stages, margin)
    if all(s.feasible for s in stages):
        ins, out = gate_ports(name)
        circuit = elaborate(build_testbench(name, bias, None, levels), models={"JJ": jjfet, "NT": ntron})
        result.verification = truth_table(circuit, ins, out, levels, gate_function(name))
    return result
