"""Line-oriented netlist parser.

Grammar (keywords are case-insensitive; names are case-preserving)::

    R<name> n1 n2 <ohms>
    I<name> n+ n- DC <amps>      |  I<name> n+ n- PULSE(<7 numbers>)
    V<name> n+ n- DC <volts>     |  V<name> n+ n- PULSE(<7 numbers>)
    J<name> drain source gate <model>
    N<name> chan+ chan- gate <model>
    X<name> <nodes...> <subckt>
    .model <name> JJFET|NTRON [card="<path>"] [<param>=<number> ...]
    .subckt <name> <ports...>  ...  .ends
    .op
    .tran <step> <stop>
    .print v(<node>) i(<element>) ...
    .end

``*`` at the start of a line or ``#`` anywhere starts a comment, a line
starting with ``+`` continues the previous one.  PULSE fields are
``low high delay rise fall width period``.  Current through a source is
taken from ``n+`` through the source to ``n-`` (SPICE convention), so
``I1 0 a DC 1u`` pushes 1 uA into node ``a``.  Node ``0`` is ground.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .ast import (
    Analysis,
    ElementDef,
    ElementKind,
    ModelDef,
    NetlistAst,
    Probe,
    SourceWaveform,
    SubcktDef,
)

__all__ = ["NetlistError", "NetlistSyntaxError", "parse", "parse_number", "GRAMMAR_VERSION"]

GRAMMAR_VERSION = "1"

_SUFFIX = {"p": -12, "n": -9, "u": -6, "m": -3, "k": 3, "meg": 6}
_NUMBER = re.compile(
    r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?", re.ASCII
)
_NAME = re.compile(r"[A-Za-z0-9_\-\[\]<>$@!~^%]+$")
_MODEL_KINDS = ("JJFET", "NTRON")


class NetlistError(ValueError):
    """Base class for netlist problems that carry a source location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        loc = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{loc}: {message}" if loc else message)


class NetlistSyntaxError(NetlistError):
    pass


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def parse_number(text: str) -> float:
    """Parse ``1e3``, ``35u``, ``2.2k``, ``1meg``...; ``m`` is milli, ``meg`` is mega."""
    m = _NUMBER.match(text)
    if not m:
        raise ValueError(f"not a number: {text!r}")
    rest = text[m.end():].lower()
    if not rest:
        return float(m.group(0))
    if rest not in _SUFFIX:
        raise ValueError(f"unknown suffix in {text!r}")
    # shift the decimal exponent in the string so "200n" rounds once, like "200e-9"
    mant, _, exp = m.group(0).lower().partition("e")
    return float(f"{mant}e{int(exp or 0) + _SUFFIX[rest]}")


def _tokenize_line(raw: str, lineno: int) -> List[_Tok]:
    toks: List[_Tok] = []
    i, n = 0, len(raw)
    while i < n:
        c = raw[i]
        if c == "#":
            break
        if c.isspace() or c == ",":
            i += 1
        elif c in "()=":
            toks.append(_Tok(c, lineno, i + 1))
            i += 1
        elif c == '"':
            j = raw.find('"', i + 1)
            if j < 0:
                raise NetlistSyntaxError("unterminated string", lineno, i + 1)
            toks.append(_Tok(raw[i:j + 1], lineno, i + 1))
            i = j + 1
        else:
            j = i
            while j < n and not raw[j].isspace() and raw[j] not in '()=",#':
                j += 1
            toks.append(_Tok(raw[i:j], lineno, i + 1))
            i = j
    return toks


def _logical_lines(text: str) -> List[List[_Tok]]:
    lines: List[List[_Tok]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.lstrip()
        if not stripped or stripped.startswith("*"):
            continue
        if stripped.startswith("+"):
            offset = len(raw) - len(stripped) + 1
            toks = _tokenize_line(" " * offset + stripped[1:], lineno)
            if not lines:
                raise NetlistSyntaxError("continuation line with nothing to continue", lineno, offset)
            lines[-1].extend(toks)
            continue
        toks = _tokenize_line(raw, lineno)
        if toks:
            lines.append(toks)
    return lines


def _num(tok: _Tok) -> float:
    try:
        return parse_number(tok.text)
    except ValueError as exc:
        raise NetlistSyntaxError(str(exc), tok.line, tok.col) from None


def _name(tok: _Tok, what: str) -> str:
    if not _NAME.match(tok.text):
        raise NetlistSyntaxError(f"invalid {what} {tok.text!r}", tok.line, tok.col)
    return tok.text


def _parse_source(toks: List[_Tok], kind: ElementKind) -> ElementDef:
    head = toks[0]
    if len(toks) < 4:
        raise NetlistSyntaxError(
            f"{head.text} expects 2 nodes and a DC value or PULSE(...)", head.line, len(toks) and toks[-1].col
        )
    nodes = (_name(toks[1], "node"), _name(toks[2], "node"))
    spec = toks[3:]
    word = spec[0].text.upper()
    if word == "PULSE":
        if len(spec) < 2 or spec[1].text != "(":
            raise NetlistSyntaxError("expected '(' after PULSE", spec[0].line, spec[0].col)
        if spec[-1].text != ")":
            raise NetlistSyntaxError("expected ')' closing PULSE", spec[-1].line, spec[-1].col)
        fields = spec[2:-1]
        if len(fields) != 7:
            raise NetlistSyntaxError(
                f"PULSE needs 7 fields (low high delay rise fall width period), got {len(fields)}",
                spec[0].line, spec[0].col,
            )
        try:
            wf = SourceWaveform.pulse(*[_num(t) for t in fields])
        except ValueError as exc:
            if isinstance(exc, NetlistSyntaxError):
                raise
            raise NetlistSyntaxError(str(exc), spec[0].line, spec[0].col) from None
    else:
        if word == "DC":
            spec = spec[1:]
        if len(spec) != 1:
            bad = spec[1] if len(spec) > 1 else toks[-1]
            raise NetlistSyntaxError(f"{head.text} expects a single DC value", bad.line, bad.col)
        wf = SourceWaveform("DC", _num(spec[0]))
    return ElementDef(head.text, kind, nodes, waveform=wf, line=head.line)


def _parse_element(toks: List[_Tok]) -> ElementDef:
    head = toks[0]
    name = _name(head, "element name")
    try:
        kind = ElementKind(name[0].upper())
    except ValueError:
        raise NetlistSyntaxError(f"unknown element kind {name[0]!r} in {name!r}", head.line, head.col) from None
    for t in toks[1:]:
        if t.text in "()=" and kind not in (ElementKind.ISOURCE, ElementKind.VSOURCE):
            raise NetlistSyntaxError(f"unexpected {t.text!r}", t.line, t.col)
    if kind is ElementKind.RESISTOR:
        if len(toks) != 4:
            raise NetlistSyntaxError(f"{name} expects 2 nodes and a resistance", head.line, head.col)
        value = _num(toks[3])
        if not value > 0 or value == float("inf"):
            raise NetlistSyntaxError("resistance must be finite and > 0", toks[3].line, toks[3].col)
        return ElementDef(name, kind, (_name(toks[1], "node"), _name(toks[2], "node")), value=value, line=head.line)
    if kind in (ElementKind.ISOURCE, ElementKind.VSOURCE):
        return _parse_source(toks, kind)
    if kind in (ElementKind.JJFET, ElementKind.NTRON):
        if len(toks) != 5:
            role = "drain, source, gate" if kind is ElementKind.JJFET else "channel+, channel-, gate"
            raise NetlistSyntaxError(
                f"{name} expects 3 nodes ({role}) and a model name", head.line, head.col
            )
        nodes = tuple(_name(t, "node") for t in toks[1:4])
        return ElementDef(name, kind, nodes, ref=_name(toks[4], "model name"), line=head.line)
    if len(toks) < 2:
        raise NetlistSyntaxError(f"{name} expects nodes and a subcircuit name", head.line, head.col)
    nodes = tuple(_name(t, "node") for t in toks[1:-1])
    return ElementDef(name, kind, nodes, ref=_name(toks[-1], "subcircuit name"), line=head.line)


def _parse_model(toks: List[_Tok]) -> ModelDef:
    head = toks[0]
    if len(toks) < 3:
        raise NetlistSyntaxError(".model expects a name and a device kind", head.line, head.col)
    name = _name(toks[1], "model name")
    kind = toks[2].text.upper()
    if kind not in _MODEL_KINDS:
        raise NetlistSyntaxError(f"unknown model kind {toks[2].text!r}", toks[2].line, toks[2].col)
    card: Optional[str] = None
    params: List[Tuple[str, float]] = []
    rest = toks[3:]
    i = 0
    while i < len(rest):
        if i + 2 >= len(rest) or rest[i + 1].text != "=":
            t = rest[i]
            raise NetlistSyntaxError("expected <key>=<value>", t.line, t.col)
        key, val = rest[i].text, rest[i + 2]
        if key.lower() == "card":
            if not (val.text.startswith('"') and val.text.endswith('"')):
                raise NetlistSyntaxError("card path must be quoted", val.line, val.col)
            card = val.text[1:-1]
        else:
            if any(k == key for k, _ in params):
                raise NetlistSyntaxError(f"parameter {key!r} given twice", rest[i].line, rest[i].col)
            params.append((key, _num(val)))
        i += 3
    return ModelDef(name, kind, card, tuple(params), line=head.line)


def _parse_probe_list(toks: List[_Tok]) -> List[Probe]:
    probes = []
    i = 1
    while i < len(toks):
        t = toks[i]
        kind = t.text.lower()
        if kind not in ("v", "i"):
            raise NetlistSyntaxError(f"expected v(<node>) or i(<element>), got {t.text!r}", t.line, t.col)
        if i + 3 >= len(toks) or toks[i + 1].text != "(" or toks[i + 3].text != ")":
            raise NetlistSyntaxError("malformed probe", t.line, t.col)
        target = toks[i + 2].text
        # probes may reach into the hierarchy with dotted paths such as X1.J2
        base, _, pin = target.partition(":") if kind == "i" else (target, "", "")
        if not all(_NAME.match(part) for part in base.split(".")) or pin not in ("", "g"):
            what = "element probe" if kind == "i" else "node probe"
            raise NetlistSyntaxError(f"invalid {what} {target!r}", toks[i + 2].line, toks[i + 2].col)
        probes.append(Probe(kind, target))
        i += 4
    if not probes:
        raise NetlistSyntaxError(".print needs at least one probe", toks[0].line, toks[0].col)
    return probes


def _check_scope(elements: List[ElementDef]) -> None:
    seen: Dict[str, ElementDef] = {}
    for e in elements:
        if e.name in seen:
            raise NetlistSyntaxError(
                f"duplicate element name {e.name!r} (first defined on line {seen[e.name].line})", e.line, 1
            )
        seen[e.name] = e


def parse(text: str) -> NetlistAst:
    """Parse netlist text into a :class:`NetlistAst`.

    Raises
    ------
    NetlistSyntaxError
        With ``line`` and ``column`` of the offending token.
    """
    models: List[ModelDef] = []
    subckts: List[SubcktDef] = []
    top: List[ElementDef] = []
    analyses: List[Analysis] = []
    prints: List[Probe] = []
    open_sub: Optional[Tuple[_Tok, str, Tuple[str, ...], List[ElementDef]]] = None

    for toks in _logical_lines(text):
        head = toks[0]
        word = head.text.lower()
        if word.startswith("."):
            if word == ".end":
                break
            if word == ".subckt":
                if open_sub is not None:
                    raise NetlistSyntaxError("nested .subckt definitions are not allowed", head.line, head.col)
                if len(toks) < 2:
                    raise NetlistSyntaxError(".subckt expects a name", head.line, head.col)
                ports = tuple(_name(t, "port") for t in toks[2:])
                if "0" in ports:
                    raise NetlistSyntaxError("ground cannot be a subcircuit port", head.line, head.col)
                if len(set(ports)) != len(ports):
                    raise NetlistSyntaxError("repeated port name", head.line, head.col)
                open_sub = (head, _name(toks[1], "subcircuit name"), ports, [])
            elif word == ".ends":
                if open_sub is None:
                    raise NetlistSyntaxError(".ends without .subckt", head.line, head.col)
                shead, sname, ports, body = open_sub
                if any(s.name == sname for s in subckts):
                    raise NetlistSyntaxError(f"duplicate subcircuit {sname!r}", shead.line, shead.col)
                _check_scope(body)
                subckts.append(SubcktDef(sname, ports, tuple(body), line=shead.line))
                open_sub = None
            elif open_sub is not None:
                raise NetlistSyntaxError(f"{head.text} is not allowed inside .subckt", head.line, head.col)
            elif word == ".model":
                m = _parse_model(toks)
                if any(o.name == m.name for o in models):
                    raise NetlistSyntaxError(f"duplicate model {m.name!r}", head.line, head.col)
                models.append(m)
            elif word == ".op":
                if len(toks) != 1:
                    raise NetlistSyntaxError(".op takes no arguments", toks[1].line, toks[1].col)
                analyses.append(Analysis("op"))
            elif word == ".tran":
                if len(toks) != 3:
                    raise NetlistSyntaxError(".tran expects <step> <stop>", head.line, head.col)
                step, stop = _num(toks[1]), _num(toks[2])
                if not (step > 0 and stop >= step):
                    raise NetlistSyntaxError(".tran needs step > 0 and stop >= step", head.line, head.col)
                analyses.append(Analysis("tran", step, stop))
            elif word == ".print":
                prints.extend(_parse_probe_list(toks))
            else:
                raise NetlistSyntaxError(f"unknown directive {head.text!r}", head.line, head.col)
            continue
        el = _parse_element(toks)
        (open_sub[3] if open_sub is not None else top).append(el)

    if open_sub is not None:
        raise NetlistSyntaxError(f".subckt {open_sub[1]!r} is missing .ends", open_sub[0].line, open_sub[0].col)
    _check_scope(top)

    model_kinds = {m.name: m.kind for m in models}
    sub_names = {s.name for s in subckts}
    for el in top + [e for s in subckts for e in s.elements]:
        if el.kind in (ElementKind.JJFET, ElementKind.NTRON):
            want = "JJFET" if el.kind is ElementKind.JJFET else "NTRON"
            if el.ref not in model_kinds:
                raise NetlistSyntaxError(f"{el.name} references undefined model {el.ref!r}", el.line, 1)
            if model_kinds[el.ref] != want:
                raise NetlistSyntaxError(
                    f"{el.name} needs a {want} model but {el.ref!r} is {model_kinds[el.ref]}", el.line, 1
                )
        elif el.kind is ElementKind.SUBCKT and el.ref not in sub_names:
            raise NetlistSyntaxError(f"{el.name} references undefined subcircuit {el.ref!r}", el.line, 1)

    return NetlistAst(tuple(models), tuple(subckts), tuple(top), tuple(analyses), tuple(prints))
