"""Gate library: netlist builders, truth tables and bias tuning."""
from .gates import (
    STAGE_KINDS,
    GateBias,
    GateBuildError,
    GateKind,
    LogicLevels,
    build_gate,
    build_testbench,
    gate_function,
    gate_ports,
    stage_switches,
)
from .truth import TruthRow, TruthTableReport, classify_level, maj3_reconfigure, truth_table
from .tuner import DEFAULT_MARGIN, StageTune, TuneGrid, TuneResult, tune_bias, tune_stage

__all__ = [
    "STAGE_KINDS",
    "GateBias",
    "GateBuildError",
    "GateKind",
    "LogicLevels",
    "build_gate",
    "build_testbench",
    "gate_function",
    "gate_ports",
    "stage_switches",
    "TruthRow",
    "TruthTableReport",
    "classify_level",
    "maj3_reconfigure",
    "truth_table",
    "DEFAULT_MARGIN",
    "StageTune",
    "TuneGrid",
    "TuneResult",
    "tune_bias",
    "tune_stage",
]
