"""Random valid netlist ASTs for round-trip testing."""
from __future__ import annotations

import random

from jjlogic.netlist import (
    Analysis,
    ElementDef,
    ElementKind,
    ModelDef,
    NetlistAst,
    Probe,
    SourceWaveform,
    SubcktDef,
)

_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"


def _ident(rng: random.Random, lead: str = "") -> str:
    return lead + "".join(rng.choice(_CHARS) for _ in range(rng.randint(1, 6)))


def _number(rng: random.Random, lo=-15, hi=6, signed=True) -> float:
    x = rng.choice([1.0, 2.5, 35.0, 0.7, 10.3, rng.random() + 0.01]) * 10 ** rng.randint(lo, hi)
    return -x if signed and rng.random() < 0.3 else x


def _waveform(rng: random.Random) -> SourceWaveform:
    if rng.random() < 0.6:
        return SourceWaveform("DC", _number(rng))
    rise, fall, width = (abs(_number(rng, -12, -6, False)) for _ in range(3))
    period = (rise + fall + width) * (1 + rng.random())
    return SourceWaveform.pulse(
        _number(rng), _number(rng), abs(_number(rng, -12, -6, False)) * rng.randint(0, 1),
        rise, fall, width, period,
    )


def _elements(rng, nodes, models, subckts, count):
    out = []
    used = set()
    for _ in range(count):
        choices = ["R", "I", "V"]
        if models["JJFET"]:
            choices.append("J")
        if models["NTRON"]:
            choices.append("N")
        if subckts:
            choices.append("X")
        k = rng.choice(choices)
        name = _ident(rng, k)
        while name.upper() in used:
            name = _ident(rng, k)
        used.add(name.upper())
        pick = lambda n: tuple(rng.choice(nodes) for _ in range(n))
        if k == "R":
            out.append(ElementDef(name, ElementKind.RESISTOR, pick(2), value=abs(_number(rng, 0, 6, False))))
        elif k in "IV":
            out.append(ElementDef(name, ElementKind(k), pick(2), waveform=_waveform(rng)))
        elif k == "J":
            out.append(ElementDef(name, ElementKind.JJFET, pick(3), ref=rng.choice(models["JJFET"])))
        elif k == "N":
            out.append(ElementDef(name, ElementKind.NTRON, pick(3), ref=rng.choice(models["NTRON"])))
        else:
            sub = rng.choice(subckts)
            out.append(ElementDef(name, ElementKind.SUBCKT, pick(len(sub.ports)), ref=sub.name))
    return tuple(out)


def random_ast(rng: random.Random) -> NetlistAst:
    models = {"JJFET": [], "NTRON": []}
    mdefs = []
    for k in range(rng.randint(0, 3)):
        kind = rng.choice(["JJFET", "NTRON"])
        name = f"M{k}{_ident(rng)}"
        params = ()
        if rng.random() < 0.5:
            key = "v_t" if kind == "JJFET" else "r_channel"
            params = ((key, _number(rng)),)
        card = rng.choice([None, f"cards/{_ident(rng)}.card"])
        mdefs.append(ModelDef(name, kind, card, params))
        models[kind].append(name)
    subckts = []
    for k in range(rng.randint(0, 2)):
        ports = tuple(dict.fromkeys(_ident(rng, "p") for _ in range(rng.randint(1, 4))))
        nodes = list(ports) + ["0"] + [_ident(rng, "n") for _ in range(3)]
        # a subcircuit may instantiate only earlier ones, so the hierarchy stays acyclic
        body = _elements(rng, nodes, models, subckts, rng.randint(0, 5))
        subckts.append(SubcktDef(f"S{k}{_ident(rng)}", ports, body))
    nodes = ["0"] + [_ident(rng, "t") for _ in range(4)]
    top = _elements(rng, nodes, models, subckts, rng.randint(1, 8))
    analyses = []
    if rng.random() < 0.5:
        analyses.append(Analysis("op"))
    if rng.random() < 0.5:
        step = abs(_number(rng, -12, -9, False))
        analyses.append(Analysis("tran", step, step * rng.randint(1, 500)))
    probes = [Probe("v", rng.choice(nodes)) for _ in range(rng.randint(0, 2))]
    probes += [Probe("i", e.name) for e in top if e.kind is not ElementKind.SUBCKT and rng.random() < 0.3]
    probes += [Probe("i", e.name + ":g") for e in top if e.kind is ElementKind.NTRON]
    return NetlistAst(tuple(mdefs), tuple(subckts), top, tuple(analyses), tuple(probes))
