"""CSV waveform and JSON operating-point writers."""
from __future__ import annotations

import io
import json

from .dc import Solution
from .transient import Waveforms

__all__ = ["waveforms_to_csv", "solution_to_dict", "solution_to_json"]


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def waveforms_to_csv(w: Waveforms) -> str:
    buf = io.StringIO()
    buf.write(",".join(("time",) + w.probes) + "\n")
    for k, t in enumerate(w.time):
        buf.write(",".join([_g17(t)] + [_g17(w.series[p][k]) for p in w.probes]) + "\n")
    return buf.getvalue()


def solution_to_dict(sol: Solution) -> dict:
    out = {
        "node_voltages": dict(sol.node_voltages),
        "branch_currents": dict(sol.branch_currents),
        "device_states": {k: s.value for k, s in sol.device_states.items()},
        "converged": sol.converged,
        "iterations": sol.iterations,
        "residual": sol.residual,
        "time": sol.time,
        "warnings": list(sol.warnings),
    }
    if sol.last_states is not None:
        out["last_states"] = [{k: s.value for k, s in st.items()} for st in sol.last_states]
    return out


def solution_to_json(sol: Solution) -> str:
    return json.dumps(solution_to_dict(sol), indent=2) + "\n"
