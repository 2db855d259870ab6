"""Netlist language: parser, canonical printer, and subcircuit elaboration."""
from .ast import (
    PULSE_FIELDS,
    Analysis,
    ElementDef,
    ElementKind,
    ModelDef,
    NetlistAst,
    Probe,
    SourceWaveform,
    SubcktDef,
)
from .circuit import GROUND, Circuit, CircuitElement, ElaborationError, elaborate
from .parser import GRAMMAR_VERSION, NetlistError, NetlistSyntaxError, parse, parse_number
from .printer import format_number, print_netlist


def parse_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


__all__ = [
    "PULSE_FIELDS",
    "Analysis",
    "ElementDef",
    "ElementKind",
    "ModelDef",
    "NetlistAst",
    "Probe",
    "SourceWaveform",
    "SubcktDef",
    "GROUND",
    "Circuit",
    "CircuitElement",
    "ElaborationError",
    "elaborate",
    "GRAMMAR_VERSION",
    "NetlistError",
    "NetlistSyntaxError",
    "parse",
    "parse_file",
    "parse_number",
    "format_number",
    "print_netlist",
]
