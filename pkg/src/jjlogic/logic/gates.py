"""Netlist builders for the JJFET/nTron gate family.

Every primitive stage shares one output structure: ``IB2`` biases the nTron
channel from the output node down to the ``VBIAS`` rail (-0.7 V), so the
output sits at the rail while the channel is superconducting and one
``IB2 * r_channel`` (0.7 V) above it once the channel switches.  The input
stage splits ``IB1`` between ``RS`` into the nTron gate and a shunt; JJFETs
in the shunt (or, for COPY, in the gate branch) steer the split.  The shunt
and the nTron gate both return to the ``VBIAS`` rail.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

from ..netlist import (
    Analysis,
    ElementDef,
    ModelDef,
    NetlistAst,
    Probe,
    SourceWaveform,
    SubcktDef,
)
from ..netlist.ast import ElementKind as K

__all__ = [
    "GateKind",
    "LogicLevels",
    "GateBias",
    "GateBuildError",
    "STAGE_KINDS",
    "gate_ports",
    "gate_function",
    "stage_switches",
    "build_gate",
    "build_testbench",
]


class GateKind(enum.Enum):
    COPY = "COPY"
    NOT = "NOT"
    NAND2 = "NAND2"
    NOR2 = "NOR2"
    MAJ3 = "MAJ3"
    XOR2 = "XOR2"

    @classmethod
    def parse(cls, text: str) -> "GateKind":
        try:
            return cls(text.upper())
        except ValueError:
            raise ValueError(f"unknown gate {text!r}; choose from {[k.value for k in cls]}") from None

    @property
    def composite(self) -> bool:
        return self in (GateKind.MAJ3, GateKind.XOR2)


# Single-nTron templates; MAJ3 and XOR2 are assembled from these.
STAGE_KINDS = ("COPY", "NOT", "NAND2", "NOR2", "MAJ3_CORE")

# Stages each composite needs a bias for, besides its own top-level fields.
_COMPOSITE_STAGES = {
    GateKind.MAJ3: ("MAJ3_CORE", "NOT"),
    GateKind.XOR2: ("NOT", "NAND2", "NOR2"),
}


class GateBuildError(ValueError):
    pass


@dataclass(frozen=True)
class LogicLevels:
    v_low: float = -0.7
    v_high: float = 0.0
    low_max: float = -0.5
    high_min: float = -0.2

    def __post_init__(self):
        if not (self.v_low < self.low_max < self.high_min < self.v_high):
            raise ValueError("need v_low < low_max < high_min < v_high")

    @property
    def swing(self) -> float:
        return self.v_high - self.v_low

    def voltage(self, bit) -> float:
        return self.v_high if bit else self.v_low


@dataclass(frozen=True)
class GateBias:
    """Bias point of one single-nTron stage.

    Composite gates carry the bias of each constituent stage in ``stages``;
    a stage missing from ``stages`` falls back to the top-level fields.
    """

    i_bias1: float
    r_s: float
    i_bias2: float = 35e-6
    v_bias: float = -0.7
    r_p: Optional[float] = None
    stages: Tuple[Tuple[str, "GateBias"], ...] = ()

    def stage(self, name: str) -> "GateBias":
        for k, b in self.stages:
            if k == name:
                return b
        return replace(self, stages=())

    def has_stage(self, name: str) -> bool:
        return any(k == name for k, _ in self.stages)

    def check_swing(self, r_channel: float, levels: LogicLevels = LogicLevels()) -> None:
        """Output-swing constraint: ``i_bias2 * r_channel`` must equal the logic swing."""
        for b in [self] + [b for _, b in self.stages]:
            if not math.isclose(b.i_bias2 * r_channel, levels.swing, rel_tol=1e-9):
                raise GateBuildError(
                    f"i_bias2 * r_channel = {b.i_bias2 * r_channel!r} V does not match the "
                    f"{levels.swing!r} V logic swing"
                )
            if not math.isclose(b.v_bias, levels.v_low, rel_tol=1e-12, abs_tol=1e-15):
                raise GateBuildError(f"v_bias {b.v_bias!r} must equal the logic-low rail {levels.v_low!r}")

    def to_dict(self) -> dict:
        d = {"i_bias1": self.i_bias1, "i_bias2": self.i_bias2, "v_bias": self.v_bias, "r_s": self.r_s}
        if self.r_p is not None:
            d["r_p"] = self.r_p
        if self.stages:
            d["stages"] = {k: b.to_dict() for k, b in self.stages}
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "GateBias":
        stages = tuple((k, cls.from_dict(v)) for k, v in (d.get("stages") or {}).items())
        return cls(
            float(d["i_bias1"]), float(d["r_s"]), float(d.get("i_bias2", 35e-6)),
            float(d.get("v_bias", -0.7)), None if d.get("r_p") is None else float(d["r_p"]), stages,
        )


def gate_ports(kind) -> Tuple[Tuple[str, ...], str]:
    """``(input ports, output port)`` of a gate or stage subcircuit."""
    name = kind.value if isinstance(kind, GateKind) else kind
    n_in = {"COPY": 1, "NOT": 1, "NAND2": 2, "NOR2": 2, "XOR2": 2, "MAJ3": 3, "MAJ3_CORE": 3}[name]
    if n_in == 1:
        return ("in",), "out"
    return tuple(f"in{k + 1}" for k in range(n_in)), "out"


def _maj(bits):
    return sum(bool(b) for b in bits) >= 2


_FUNCTIONS: Dict[str, Callable[[Sequence[bool]], bool]] = {
    "COPY": lambda b: bool(b[0]),
    "NOT": lambda b: not b[0],
    "NAND2": lambda b: not (b[0] and b[1]),
    "NOR2": lambda b: not (b[0] or b[1]),
    "MAJ3": _maj,
    "XOR2": lambda b: bool(b[0]) != bool(b[1]),
    "MAJ3_CORE": lambda b: not _maj(b),
}


def gate_function(kind) -> Callable[[Sequence[bool]], bool]:
    name = kind.value if isinstance(kind, GateKind) else kind
    return _FUNCTIONS[name]


def stage_switches(stage: str, bits: Sequence[bool]) -> bool:
    """Whether a single-nTron stage's channel must switch (output high) for ``bits``."""
    return _FUNCTIONS[stage](bits)


def _r(name, a, b, value):
    return ElementDef(name, K.RESISTOR, (a, b), value=float(value))


def _i(name, a, b, value):
    return ElementDef(name, K.ISOURCE, (a, b), waveform=SourceWaveform("DC", float(value)))


def _v(name, a, b, value):
    return ElementDef(name, K.VSOURCE, (a, b), waveform=SourceWaveform("DC", float(value)))


def _j(name, d, s, g, model):
    return ElementDef(name, K.JJFET, (d, s, g), ref=model)


def _x(name, nodes, sub):
    return ElementDef(name, K.SUBCKT, tuple(nodes), ref=sub)


def _stage_subckt(stage: str, b: GateBias, jj: str, nt: str, name: Optional[str] = None) -> SubcktDef:
    ins, out = gate_ports(stage)
    body = [_i("IB1", "0", "a", b.i_bias1)]
    if stage == "COPY":
        if b.r_p is None:
            raise GateBuildError("COPY needs r_p")
        body += [_j("J1", "a", "b", ins[0], jj), _r("RS", "b", "g", b.r_s), _r("RP", "a", "vb", b.r_p)]
    else:
        body.append(_r("RS", "a", "g", b.r_s))
        if stage == "NOT":
            body.append(_j("J1", "a", "vb", ins[0], jj))
        elif stage == "NAND2":
            body += [_j("J1", "a", "m1", ins[0], jj), _j("J2", "m1", "vb", ins[1], jj)]
        elif stage == "NOR2":
            body += [_j("J1", "a", "vb", ins[0], jj), _j("J2", "a", "vb", ins[1], jj)]
        elif stage == "MAJ3_CORE":
            body += [
                _j("J1", "a", "m1", ins[0], jj),
                _j("J2", "m1", "m2", ins[1], jj),
                _j("J3", "m2", "vb", ins[2], jj),
            ]
        else:
            raise GateBuildError(f"unknown stage {stage!r}")
    body += [
        ElementDef("N1", K.NTRON, (out, "vb", "g"), ref=nt),
        _i("IB2", "0", out, b.i_bias2),
        _v("VBIAS", "vb", "0", b.v_bias),
    ]
    return SubcktDef(name or stage, ins + (out,), tuple(body))


def _models(jjfet_model, ntron_model, jjfet_card, ntron_card):
    return (ModelDef(jjfet_model, "JJFET", jjfet_card), ModelDef(ntron_model, "NTRON", ntron_card))


def build_gate(
    kind,
    jjfet_model: str = "JJ",
    ntron_model: str = "NT",
    bias: GateBias = None,
    *,
    jjfet_card: Optional[str] = None,
    ntron_card: Optional[str] = None,
) -> NetlistAst:
    """Subcircuit definitions (plus ``.model`` lines) for one gate.

    ``kind`` is a :class:`GateKind` or one of :data:`STAGE_KINDS`.  The
    top-level subcircuit is named after the gate; MAJ3 also defines
    ``MAJ3_CORE`` and ``NOT``, XOR2 defines ``NOT``, ``NAND2`` and ``NOR2``.
    Cards left as ``None`` select the built-in default cards.
    """
    if bias is None:
        raise GateBuildError("a GateBias is required")
    name = kind.value if isinstance(kind, GateKind) else kind
    models = _models(jjfet_model, ntron_model, jjfet_card, ntron_card)
    jj, nt = jjfet_model, ntron_model
    if name == "MAJ3":
        if not bias.has_stage("NOT"):
            raise GateBuildError("MAJ3 needs a 'NOT' stage bias for its output inverter")
        subs = (
            _stage_subckt("MAJ3_CORE", bias.stage("MAJ3_CORE"), jj, nt),
            _stage_subckt("NOT", bias.stage("NOT"), jj, nt),
            SubcktDef("MAJ3", ("in1", "in2", "in3", "out"), (
                _x("XCORE", ("in1", "in2", "in3", "mid"), "MAJ3_CORE"),
                _x("XINV", ("mid", "out"), "NOT"),
            )),
        )
        return NetlistAst(models, subs)
    if name == "XOR2":
        missing = [s for s in _COMPOSITE_STAGES[GateKind.XOR2] if not bias.has_stage(s)]
        if missing:
            raise GateBuildError(f"XOR2 needs primitive subcircuit biases for {missing}")
        subs = (
            _stage_subckt("NOT", bias.stage("NOT"), jj, nt),
            _stage_subckt("NAND2", bias.stage("NAND2"), jj, nt),
            _stage_subckt("NOR2", bias.stage("NOR2"), jj, nt),
            # a xor b = NOR(NOR(a, b), NOT(NAND(a, b)))
            SubcktDef("XOR2", ("in1", "in2", "out"), (
                _x("XNOR1", ("in1", "in2", "n_or"), "NOR2"),
                _x("XNAND", ("in1", "in2", "n_nand"), "NAND2"),
                _x("XAND", ("n_nand", "n_and"), "NOT"),
                _x("XNOR2", ("n_or", "n_and", "out"), "NOR2"),
            )),
        )
        return NetlistAst(models, subs)
    if name not in STAGE_KINDS:
        raise GateBuildError(f"unknown gate {name!r}")
    return NetlistAst(models, (_stage_subckt(name, bias, jj, nt),))


def build_testbench(
    kind,
    bias: GateBias,
    inputs: Sequence[bool] = None,
    levels: LogicLevels = LogicLevels(),
    *,
    jjfet_model: str = "JJ",
    ntron_model: str = "NT",
    jjfet_card: Optional[str] = None,
    ntron_card: Optional[str] = None,
) -> NetlistAst:
    """Standalone netlist: the gate as ``XG`` with DC input drivers, ``.op`` and ``.print``.

    Input port ``p`` is driven by ``VIN_<p>`` from top-level node ``p``; the
    output is top-level node ``out``.
    """
    gate = build_gate(kind, jjfet_model, ntron_model, bias, jjfet_card=jjfet_card, ntron_card=ntron_card)
    name = kind.value if isinstance(kind, GateKind) else kind
    ins, out = gate_ports(name)
    bits = list(inputs) if inputs is not None else [False] * len(ins)
    if len(bits) != len(ins):
        raise GateBuildError(f"{name} has {len(ins)} inputs, got {len(bits)} values")
    top = tuple(_v(f"VIN_{p}", p, "0", levels.voltage(b)) for p, b in zip(ins, bits))
    top += (_x("XG", ins + (out,), name),)
    probes = (Probe("v", out),) + tuple(Probe("v", p) for p in ins)
    return NetlistAst(gate.models, gate.subckts, top, (Analysis("op"),), probes)
