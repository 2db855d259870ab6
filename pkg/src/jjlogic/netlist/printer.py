"""Canonical text form of a :class:`NetlistAst`."""
from __future__ import annotations

from typing import List

from .ast import ElementDef, ElementKind, NetlistAst

__all__ = ["print_netlist", "format_number"]


def format_number(x: float) -> str:
    # repr is the shortest string that round-trips a double exactly
    return repr(float(x))


def _element_line(e: ElementDef) -> str:
    nodes = " ".join(e.nodes)
    if e.kind is ElementKind.RESISTOR:
        return f"{e.name} {nodes} {format_number(e.value)}"
    if e.kind in (ElementKind.ISOURCE, ElementKind.VSOURCE):
        wf = e.waveform
        if wf.kind == "DC":
            return f"{e.name} {nodes} DC {format_number(wf.dc)}"
        fields = " ".join(format_number(v) for v in wf.pulse_values)
        return f"{e.name} {nodes} PULSE({fields})"
    parts = [e.name] + list(e.nodes) + [e.ref]
    return " ".join(parts)


def print_netlist(ast: NetlistAst, title: str = "") -> str:
    """Render ``ast`` so that ``parse(print_netlist(ast)) == ast``."""
    out: List[str] = [f"* {line}" for line in title.splitlines()] if title else []
    for m in ast.models:
        line = f".model {m.name} {m.kind}"
        if m.card is not None:
            line += f' card="{m.card}"'
        for k, v in m.params:
            line += f" {k}={format_number(v)}"
        out.append(line)
    for s in ast.subckts:
        out.append(" ".join([".subckt", s.name, *s.ports]))
        out.extend(_element_line(e) for e in s.elements)
        out.append(".ends")
    out.extend(_element_line(e) for e in ast.elements)
    for a in ast.analyses:
        if a.kind == "op":
            out.append(".op")
        else:
            out.append(f".tran {format_number(a.step)} {format_number(a.stop)}")
    if ast.prints:
        out.append(".print " + " ".join(p.label for p in ast.prints))
    out.append(".end")
    return "\n".join(out) + "\n"
