"""Device card files.

Grammar (one statement per line, ``#`` starts a comment)::

    param <name> = <number>
    table <name>
    <x> <y>
    ...
    end

Numbers are plain decimal or scientific notation in SI units.  A JJFET card
needs tables ``r_sg`` and ``r_n`` (indexed by gate overdrive in volts) and
accepts params ``v_t``, ``v_crit``, ``ic_a0``, ``ic_a1``, ``delta_gap``.  An
nTron card needs table ``i_sw`` (indexed by gate current in amperes) and
accepts ``r_channel`` and ``latching`` (0 or 1).
"""
from __future__ import annotations

import os
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Tuple, Union

from .devices import DeviceParams, InvalidTableError, JjfetParams, LookupTable1D, NtronParams

__all__ = [
    "CardError",
    "parse_card",
    "load_card",
    "dump_card",
    "default_jjfet",
    "default_ntron",
    "DEFAULT_CARDS",
]

DEFAULT_CARDS = {"JJFET": "jjfet_default.card", "NTRON": "ntron_default.card"}

_SCHEMA = {
    "JJFET": ({"v_t", "v_crit", "ic_a0", "ic_a1", "delta_gap"}, ("r_sg", "r_n")),
    "NTRON": ({"r_channel", "latching"}, ("i_sw",)),
}


class CardError(ValueError):
    def __init__(self, message: str, line: int = 0, source: str = "<card>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


def _number(tok: str, lineno: int, source: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise CardError(f"expected a number, got {tok!r}", lineno, source) from None


def parse_card(text: str, kind: str, source: str = "<card>") -> DeviceParams:
    kind = kind.upper()
    if kind not in _SCHEMA:
        raise CardError(f"unknown device kind {kind!r}", 0, source)
    allowed, required_tables = _SCHEMA[kind]
    params: Dict[str, float] = {}
    tables: Dict[str, List[Tuple[float, float]]] = {}
    current = None
    current_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0].lower()
        if current is not None:
            if head == "end" and len(words) == 1:
                current = None
                continue
            if len(words) != 2:
                raise CardError("table rows need exactly two numbers", lineno, source)
            tables[current].append(
                (_number(words[0], lineno, source), _number(words[1], lineno, source))
            )
            continue
        if head == "param":
            rest = line[len(words[0]):]
            if "=" not in rest:
                raise CardError("expected 'param <name> = <number>'", lineno, source)
            name, value = (s.strip() for s in rest.split("=", 1))
            if name not in allowed:
                raise CardError(f"unknown {kind} param {name!r}", lineno, source)
            if name in params:
                raise CardError(f"param {name!r} given twice", lineno, source)
            params[name] = _number(value, lineno, source)
        elif head == "table":
            if len(words) != 2:
                raise CardError("expected 'table <name>'", lineno, source)
            name = words[1]
            if name not in required_tables:
                raise CardError(f"unknown {kind} table {name!r}", lineno, source)
            if name in tables:
                raise CardError(f"table {name!r} given twice", lineno, source)
            tables[name] = []
            current, current_line = name, lineno
        else:
            raise CardError(f"unexpected statement {words[0]!r}", lineno, source)
    if current is not None:
        raise CardError(f"table {current!r} is missing 'end'", current_line, source)
    for name in required_tables:
        if name not in tables:
            raise CardError(f"missing table {name!r}", 0, source)
    try:
        luts = {name: LookupTable1D.from_pairs(rows) for name, rows in tables.items()}
        if kind == "JJFET":
            return JjfetParams(**luts, **params)
        if "latching" in params:
            params["latching"] = bool(params["latching"])
        return NtronParams(**luts, **params)
    except (InvalidTableError, ValueError) as exc:
        if isinstance(exc, CardError):
            raise
        raise CardError(str(exc), 0, source) from None


def load_card(path: Union[str, os.PathLike], kind: str) -> DeviceParams:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        return parse_card(fh.read(), kind, source=path)


def dump_card(p: DeviceParams, header: str = "") -> str:
    """Serialize ``p`` so that ``parse_card(dump_card(p), kind) == p``."""
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    if isinstance(p, JjfetParams):
        scalars = [("v_t", p.v_t), ("v_crit", p.v_crit), ("ic_a0", p.ic_a0), ("ic_a1", p.ic_a1)]
        if p.delta_gap is not None:
            scalars.append(("delta_gap", p.delta_gap))
        tables = [("r_sg", p.r_sg), ("r_n", p.r_n)]
    else:
        scalars = [("r_channel", p.r_channel), ("latching", int(p.latching))]
        tables = [("i_sw", p.i_sw)]
    lines += [f"param {k} = {v!r}" for k, v in scalars]
    for name, lut in tables:
        lines.append(f"table {name}")
        lines += [f"{x!r} {y!r}" for x, y in lut.pairs]
        lines.append("end")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def _builtin(kind: str) -> DeviceParams:
    name = DEFAULT_CARDS[kind]
    text = resources.files("jjlogic.data").joinpath(name).read_text(encoding="utf-8")
    return parse_card(text, kind, source=name)


def default_jjfet() -> JjfetParams:
    return _builtin("JJFET")


def default_ntron() -> NtronParams:
    return _builtin("NTRON")
