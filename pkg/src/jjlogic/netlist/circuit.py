"""Flat, elaborated circuits and subcircuit expansion."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..cards import CardError, default_jjfet, default_ntron, load_card
from ..devices import DeviceParams, JjfetParams, NtronParams
from .ast import Analysis, ElementDef, ElementKind, ModelDef, NetlistAst, Probe, SourceWaveform
from .parser import NetlistError

__all__ = ["GROUND", "CircuitElement", "Circuit", "ElaborationError", "elaborate"]

GROUND = "0"

_PARAM_FIELDS = {
    "JJFET": {f.name for f in dataclasses.fields(JjfetParams)} - {"r_sg", "r_n"},
    "NTRON": {f.name for f in dataclasses.fields(NtronParams)} - {"i_sw"},
}


class ElaborationError(NetlistError):
    pass


@dataclass(frozen=True)
class CircuitElement:
    """A primitive element with hierarchical name and resolved parameters.

    Node order: R ``(a, b)``; I/V ``(n+, n-)``; J ``(drain, source, gate)``;
    N ``(chan+, chan-, gate)``.
    """

    name: str
    kind: ElementKind
    nodes: Tuple[str, ...]
    value: Optional[float] = None
    waveform: Optional[SourceWaveform] = None
    model: Optional[DeviceParams] = None
    model_name: Optional[str] = None


@dataclass(frozen=True)
class Circuit:
    nodes: Tuple[str, ...]
    elements: Tuple[CircuitElement, ...]
    analyses: Tuple[Analysis, ...] = ()
    prints: Tuple[Probe, ...] = ()
    _index: Dict[str, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.nodes or self.nodes[0] != GROUND:
            raise ValueError("a circuit's first node must be ground '0'")
        index = {n: i for i, n in enumerate(self.nodes)}
        if len(index) != len(self.nodes):
            raise ValueError("duplicate node names")
        names = set()
        for e in self.elements:
            if e.name in names:
                raise ValueError(f"duplicate element {e.name!r}")
            names.add(e.name)
            for n in e.nodes:
                if n not in index:
                    raise ValueError(f"element {e.name!r} uses unknown node {n!r}")
        object.__setattr__(self, "_index", index)

    def node_index(self, name: str) -> int:
        return self._index[name]

    def element(self, name: str) -> CircuitElement:
        for e in self.elements:
            if e.name == name:
                return e
        raise KeyError(name)

    def count(self, kind: ElementKind) -> int:
        return sum(1 for e in self.elements if e.kind is kind)

    def replace_elements(self, updates: Mapping[str, CircuitElement] = (), extra: Iterable[CircuitElement] = ()) -> "Circuit":
        """Return a copy with some elements swapped out and new ones appended."""
        updates = dict(updates)
        elems = [updates.pop(e.name, e) for e in self.elements]
        if updates:
            raise KeyError(f"no such elements: {sorted(updates)}")
        extra = list(extra)
        nodes = list(self.nodes)
        known = set(nodes)
        for e in elems + extra:
            for n in e.nodes:
                if n not in known:
                    known.add(n)
                    nodes.append(n)
        return Circuit(tuple(nodes), tuple(elems + extra), self.analyses, self.prints)

    def with_values(self, values: Mapping[str, float]) -> "Circuit":
        """Set resistor values or DC source levels by element name."""
        updates = {}
        for name, v in values.items():
            e = self.element(name)
            if e.kind is ElementKind.RESISTOR:
                updates[name] = dataclasses.replace(e, value=float(v))
            elif e.kind in (ElementKind.ISOURCE, ElementKind.VSOURCE):
                updates[name] = dataclasses.replace(e, waveform=SourceWaveform("DC", float(v)))
            else:
                raise ValueError(f"{name} has no scalar value")
        return self.replace_elements(updates)


class _CardResolver:
    def __init__(self, ast: NetlistAst, base_dir, card_paths, models):
        self.ast = ast
        self.search = [os.fspath(p) for p in ([base_dir] if base_dir else []) + list(card_paths)]
        self.overrides = dict(models or {})
        self.cache: Dict[str, DeviceParams] = {}

    def _find(self, card: str, m: ModelDef) -> str:
        if os.path.isabs(card):
            if os.path.isfile(card):
                return card
        else:
            for d in self.search:
                cand = os.path.join(d, card)
                if os.path.isfile(cand):
                    return cand
            if not self.search and os.path.isfile(card):
                return card
        raise ElaborationError(
            f"unresolved model {m.name!r}: card {card!r} not found in {self.search or ['.']}", m.line
        )

    def __call__(self, name: str, el: ElementDef) -> DeviceParams:
        if name in self.cache:
            return self.cache[name]
        if name in self.overrides:
            p = self.overrides[name]
        else:
            m = self.ast.model(name)
            if m is None:
                raise ElaborationError(f"unresolved model {name!r} used by {el.name}", el.line)
            if m.card is None:
                p = default_jjfet() if m.kind == "JJFET" else default_ntron()
            else:
                path = self._find(m.card, m)
                try:
                    p = load_card(path, m.kind)
                except (CardError, OSError) as exc:
                    raise ElaborationError(f"model {m.name!r}: {exc}", m.line) from None
            if m.params:
                unknown = [k for k, _ in m.params if k not in _PARAM_FIELDS[m.kind]]
                if unknown:
                    raise ElaborationError(f"model {m.name!r}: unknown parameters {unknown}", m.line)
                kw = {k: (bool(v) if k == "latching" else v) for k, v in m.params}
                try:
                    p = dataclasses.replace(p, **kw)
                except ValueError as exc:
                    raise ElaborationError(f"model {m.name!r}: {exc}", m.line) from None
        want = JjfetParams if el.kind is ElementKind.JJFET else NtronParams
        if not isinstance(p, want):
            raise ElaborationError(f"{el.name} needs a {want.__name__} model but {name!r} is not", el.line)
        self.cache[name] = p
        return p


def elaborate(
    ast: NetlistAst,
    *,
    base_dir: Optional[Union[str, os.PathLike]] = None,
    card_paths: Sequence[Union[str, os.PathLike]] = (),
    models: Optional[Mapping[str, DeviceParams]] = None,
) -> Circuit:
    """Flatten ``ast`` into a :class:`Circuit`.

    Instances are expanded depth-first; internal names are prefixed with the
    dotted instance path (``X1.J2``, ``X1.n_mid``).  Ports are spliced onto
    the caller's nodes and ground stays global.  Card files resolve against
    ``base_dir`` first, then ``card_paths``; ``models`` maps model names to
    parameter objects and takes precedence over any ``.model`` line.
    """
    resolve = _CardResolver(ast, base_dir, card_paths, models)
    nodes: List[str] = [GROUND]
    seen_nodes = {GROUND}
    out: List[CircuitElement] = []

    def node(n: str) -> str:
        if n not in seen_nodes:
            seen_nodes.add(n)
            nodes.append(n)
        return n

    def expand(elements: Sequence[ElementDef], prefix: str, portmap: Dict[str, str], stack: Tuple[str, ...]):
        def map_node(n: str) -> str:
            if n == GROUND:
                return GROUND
            if n in portmap:
                return portmap[n]
            return prefix + n

        for el in elements:
            if el.kind is ElementKind.SUBCKT:
                sub = ast.subckt(el.ref)
                if sub is None:
                    raise ElaborationError(f"{el.name} references undefined subcircuit {el.ref!r}", el.line)
                if sub.name in stack:
                    chain = " -> ".join(stack + (sub.name,))
                    raise ElaborationError(f"recursive subcircuit instantiation: {chain}", el.line)
                if len(sub.ports) != len(el.nodes):
                    raise ElaborationError(
                        f"{el.name}: subcircuit {sub.name!r} has {len(sub.ports)} ports, got {len(el.nodes)} nodes",
                        el.line,
                    )
                inner = {p: map_node(n) for p, n in zip(sub.ports, el.nodes)}
                expand(sub.elements, prefix + el.name + ".", inner, stack + (sub.name,))
                continue
            mapped = tuple(node(map_node(n)) for n in el.nodes)
            model = resolve(el.ref, el) if el.kind in (ElementKind.JJFET, ElementKind.NTRON) else None
            out.append(
                CircuitElement(prefix + el.name, el.kind, mapped, el.value, el.waveform, model, el.ref)
            )

    expand(ast.elements, "", {}, ())
    return Circuit(tuple(nodes), tuple(out), ast.analyses, ast.prints)
