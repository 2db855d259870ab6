"""Syntax tree for the netlist language.

Nodes compare structurally; source line numbers are carried for diagnostics
but excluded from equality so that ``parse(print(ast)) == ast``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

__all__ = [
    "ElementKind",
    "SourceWaveform",
    "ModelDef",
    "ElementDef",
    "SubcktDef",
    "Analysis",
    "Probe",
    "NetlistAst",
    "PULSE_FIELDS",
]

PULSE_FIELDS = ("low", "high", "delay", "rise", "fall", "width", "period")


class ElementKind(enum.Enum):
    RESISTOR = "R"
    ISOURCE = "I"
    VSOURCE = "V"
    JJFET = "J"
    NTRON = "N"
    SUBCKT = "X"

    @property
    def arity(self) -> Optional[int]:
        return {"R": 2, "I": 2, "V": 2, "J": 3, "N": 3}.get(self.value)


@dataclass(frozen=True)
class SourceWaveform:
    """DC level or SPICE-style trapezoidal pulse train."""

    kind: str = "DC"
    dc: float = 0.0
    low: float = 0.0
    high: float = 0.0
    delay: float = 0.0
    rise: float = 0.0
    fall: float = 0.0
    width: float = 0.0
    period: float = 0.0

    def __post_init__(self):
        if self.kind not in ("DC", "PULSE"):
            raise ValueError(f"unknown waveform kind {self.kind!r}")
        if self.kind == "PULSE":
            if not (self.rise > 0 and self.fall > 0):
                raise ValueError("PULSE rise and fall must be > 0")
            if self.width < 0:
                raise ValueError("PULSE width must be >= 0")
            if self.delay < 0:
                raise ValueError("PULSE delay must be >= 0")
            if self.period < self.rise + self.width + self.fall:
                raise ValueError("PULSE period shorter than rise + width + fall")

    @classmethod
    def pulse(cls, low, high, delay, rise, fall, width, period) -> "SourceWaveform":
        return cls("PULSE", 0.0, low, high, delay, rise, fall, width, period)

    @property
    def pulse_values(self) -> Tuple[float, ...]:
        return tuple(getattr(self, f) for f in PULSE_FIELDS)

    def scaled(self, factor: float) -> "SourceWaveform":
        if self.kind == "DC":
            return SourceWaveform("DC", self.dc * factor)
        return SourceWaveform.pulse(
            self.low * factor, self.high * factor, self.delay, self.rise,
            self.fall, self.width, self.period,
        )

    def value(self, t: float = 0.0) -> float:
        if self.kind == "DC":
            return self.dc
        if t <= self.delay:
            return self.low
        tt = math.fmod(t - self.delay, self.period)
        if tt < self.rise:
            return self.low + (self.high - self.low) * tt / self.rise
        tt -= self.rise
        if tt <= self.width:
            return self.high
        tt -= self.width
        if tt < self.fall:
            return self.high + (self.low - self.high) * tt / self.fall
        return self.low


@dataclass(frozen=True)
class ModelDef:
    name: str
    kind: str  # "JJFET" | "NTRON"
    card: Optional[str] = None
    params: Tuple[Tuple[str, float], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ElementDef:
    """One netlist line: a primitive element or an ``X`` instantiation.

    ``ref`` names the model (J, N) or the subcircuit (X).
    """

    name: str
    kind: ElementKind
    nodes: Tuple[str, ...]
    value: Optional[float] = None
    waveform: Optional[SourceWaveform] = None
    ref: Optional[str] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SubcktDef:
    name: str
    ports: Tuple[str, ...]
    elements: Tuple[ElementDef, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Analysis:
    kind: str  # "op" | "tran"
    step: Optional[float] = None
    stop: Optional[float] = None


@dataclass(frozen=True)
class Probe:
    kind: str  # "v" | "i"
    target: str

    @property
    def label(self) -> str:
        return f"{self.kind}({self.target})"


@dataclass(frozen=True)
class NetlistAst:
    models: Tuple[ModelDef, ...] = ()
    subckts: Tuple[SubcktDef, ...] = ()
    elements: Tuple[ElementDef, ...] = ()
    analyses: Tuple[Analysis, ...] = ()
    prints: Tuple[Probe, ...] = ()

    def model(self, name: str) -> Optional[ModelDef]:
        for m in self.models:
            if m.name == name:
                return m
        return None

    def subckt(self, name: str) -> Optional[SubcktDef]:
        for s in self.subckts:
            if s.name == name:
                return s
        return None

    def merged(self, other: "NetlistAst") -> "NetlistAst":
        """Concatenate two trees, keeping the first definition of any repeated model or subcircuit."""
        models = list(self.models)
        models += [m for m in other.models if self.model(m.name) is None]
        subckts = list(self.subckts)
        subckts += [s for s in other.subckts if self.subckt(s.name) is None]
        return NetlistAst(
            tuple(models), tuple(subckts), self.elements + other.elements,
            self.analyses + other.analyses, self.prints + other.prints,
        )
