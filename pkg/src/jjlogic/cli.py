"""``jjlogic`` command-line front end.

Exit codes: 0 success, 1 input error (bad file, netlist, card, bias or
arguments; floating node), 2 solver non-convergence, 3 logic-verification
failure, 4 tuner infeasibility.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .cards import CardError, default_jjfet, default_ntron, load_card
from .devices import DeviceStateError, InvalidTableError
from .logic import (
    DEFAULT_MARGIN,
    GateBias,
    GateBuildError,
    GateKind,
    LogicLevels,
    TuneGrid,
    build_testbench,
    gate_function,
    gate_ports,
    truth_table,
    tune_bias,
)
from .netlist import NetlistError, elaborate, parse_file, print_netlist
from .solver import SolverError, run_transient, solution_to_json, solve_dc, waveforms_to_csv

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGENT, EXIT_LOGIC, EXIT_INFEASIBLE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for non-convergence here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _write(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_circuit(args):
    ast = parse_file(args.netlist)
    base = os.path.dirname(os.path.abspath(args.netlist))
    return ast, elaborate(ast, base_dir=base, card_paths=args.card)


def _cards(args):
    jj = load_card(args.jjfet_card, "JJFET") if args.jjfet_card else default_jjfet()
    nt = load_card(args.ntron_card, "NTRON") if args.ntron_card else default_ntron()
    return jj, nt


def _grid(args) -> TuneGrid:
    g = TuneGrid()
    return TuneGrid(
        tuple(args.ibias1_range) if args.ibias1_range else g.i_bias1,
        tuple(args.rs_range) if args.rs_range else g.r_s,
        tuple(args.rp_range) if args.rp_range else g.r_p,
        args.points if args.points else g.points,
    )


def _read_bias(path: str) -> GateBias:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "bias" in data:
        if data.get("feasible") is False:
            raise UsageError(f"{path}: tune report is infeasible; no usable bias")
        data = data["bias"]
    try:
        return GateBias.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a bias file ({exc})") from None


def _fixed_pins(specs: Sequence[str]):
    fixed = {}
    for s in specs or ():
        node, sep, bit = s.partition("=")
        if not sep or bit not in ("0", "1"):
            raise UsageError(f"--fix expects NODE=0 or NODE=1, got {s!r}")
        fixed[node] = int(bit)
    return fixed


def _expected(kind: Optional[GateKind], inputs, fixed):
    """Truth function over ``inputs`` with ``fixed`` pins substituted into the gate's port order."""
    if kind is None:
        return None
    full = gate_ports(kind)[0]
    ports = tuple(inputs) + tuple(fixed)
    if sorted(ports) != sorted(full):
        raise UsageError(f"{kind.value} inputs and --fix pins must cover ports {list(full)}")
    fn = gate_function(kind)

    def expected(bits):
        value = dict(zip(inputs, bits))
        value.update({k: bool(v) for k, v in fixed.items()})
        return fn(tuple(value[p] for p in full))

    return expected


def cmd_op(args) -> int:
    _, circuit = _load_circuit(args)
    sol = solve_dc(circuit)
    _write(solution_to_json(sol), args.output)
    if not sol.converged:
        for w in sol.warnings:
            print(f"warning: {w}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    return EXIT_OK


def cmd_tran(args) -> int:
    ast, circuit = _load_circuit(args)
    tran = [a for a in circuit.analyses if a.kind == "tran"]
    step = args.step if args.step is not None else (tran[0].step if tran else None)
    stop = args.stop if args.stop is not None else (tran[0].stop if tran else None)
    if step is None or stop is None:
        raise UsageError("need --step and --stop (or a .tran directive)")
    if not step > 0 or stop < step:
        raise UsageError("need --step > 0 and --stop >= --step")
    w = run_transient(circuit, step, stop, args.probe or None)
    _write(waveforms_to_csv(w), args.output)
    if w.truncated:
        print(f"warning: {w.diagnostic}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    return EXIT_OK


def _gate_bias(args, kind: GateKind, jj, nt):
    if args.bias:
        return _read_bias(args.bias)
    result = tune_bias(kind, jj, nt, args.margin, _grid(args))
    if not result.feasible:
        print(result.explain(), file=sys.stderr)
        return None
    return result.bias


def cmd_truthtable(args) -> int:
    if (args.gate is None) == (args.netlist is None):
        raise UsageError("give exactly one of --gate or a netlist")
    fixed = _fixed_pins(args.fix)
    levels = LogicLevels()
    if args.gate is not None:
        kind = GateKind.parse(args.gate)
        jj, nt = _cards(args)
        bias = _gate_bias(args, kind, jj, nt)
        if bias is None:
            return EXIT_INFEASIBLE
        bias.check_swing(nt.r_channel, levels)
        circuit = elaborate(build_testbench(kind, bias, None, levels), models={"JJ": jj, "NT": nt})
        ports, out = gate_ports(kind)
        inputs = tuple(args.inputs) if args.inputs else tuple(p for p in ports if p not in fixed)
        output = args.output_node or out
    else:
        _, circuit = _load_circuit(args)
        kind = GateKind.parse(args.expect) if args.expect else None
        if not args.inputs or not args.output_node:
            raise UsageError("a netlist truth table needs --inputs and --output-node")
        inputs, output = tuple(args.inputs), args.output_node
    expected = _expected(kind if args.expect or args.gate else None, inputs, fixed)
    report = truth_table(circuit, inputs, output, levels, expected, fixed)
    _write(report.to_json(), args.output)
    print(report.format_table(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_LOGIC


def cmd_tune(args) -> int:
    if not args.margin > 0:
        raise UsageError("--margin must be > 0")
    kind = GateKind.parse(args.gate)
    jj, nt = _cards(args)
    result = tune_bias(kind, jj, nt, args.margin, _grid(args))
    _write(result.to_json(), args.output)
    if not result.feasible:
        print(result.explain(), file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_emit_gate(args) -> int:
    kind = GateKind.parse(args.gate)
    jj, nt = _cards(args)
    bias = _gate_bias(args, kind, jj, nt)
    if bias is None:
        return EXIT_INFEASIBLE
    bias.check_swing(nt.r_channel)
    card = lambda p: os.path.abspath(p) if p else None
    ast = build_testbench(
        kind, bias, None, jjfet_card=card(args.jjfet_card), ntron_card=card(args.ntron_card)
    )
    _write(print_netlist(ast, title=f"{kind.value} gate testbench"), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--no-banner", action="store_true", help="suppress the version banner on stderr")

    circ = argparse.ArgumentParser(add_help=False)
    circ.add_argument("--card", action="append", default=[], metavar="DIR",
                      help="card search directory, tried after the netlist's own directory (repeatable)")

    gate = argparse.ArgumentParser(add_help=False)
    gate.add_argument("--jjfet-card", metavar="FILE", help="JJFET card (default: built-in)")
    gate.add_argument("--ntron-card", metavar="FILE", help="nTron card (default: built-in)")
    gate.add_argument("--margin", type=float, default=DEFAULT_MARGIN,
                      help="required gate-current margin in amperes (default %(default)g)")
    gate.add_argument("--ibias1-range", type=float, nargs=2, metavar=("LO", "HI"))
    gate.add_argument("--rs-range", type=float, nargs=2, metavar=("LO", "HI"))
    gate.add_argument("--rp-range", type=float, nargs=2, metavar=("LO", "HI"))
    gate.add_argument("--points", type=int, help="grid points per axis (default 25)")

    p = _Parser(prog="jjlogic", description="JJFET/nTron logic circuit simulator")
    p.add_argument("--version", action="version", version=f"jjlogic {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("op", parents=[common, circ], help="DC operating point as JSON")
    s.add_argument("netlist")
    s.set_defaults(func=cmd_op)

    s = sub.add_parser("tran", parents=[common, circ], help="quasi-static transient as CSV")
    s.add_argument("netlist")
    s.add_argument("--step", type=float)
    s.add_argument("--stop", type=float)
    s.add_argument("--probe", action="append", help="probe label such as v(out) or i(R1) (repeatable)")
    s.set_defaults(func=cmd_tran)

    s = sub.add_parser("truthtable", parents=[common, circ, gate], help="exhaustive truth table as JSON")
    s.add_argument("netlist", nargs="?")
    s.add_argument("--gate", help="built-in gate: " + ", ".join(k.value.lower() for k in GateKind))
    s.add_argument("--bias", metavar="FILE", help="bias JSON or tune report (default: tune first)")
    s.add_argument("--inputs", nargs="+", metavar="NODE")
    s.add_argument("--output-node", metavar="NODE")
    s.add_argument("--expect", metavar="KIND", help="expected function for a netlist, as a gate name")
    s.add_argument("--fix", action="append", metavar="NODE=BIT", help="pin an input to a constant bit")
    s.set_defaults(func=cmd_truthtable)

    s = sub.add_parser("tune", parents=[common, gate], help="grid-search a gate bias point")
    s.add_argument("--gate", required=True)
    s.set_defaults(func=cmd_tune)

    s = sub.add_parser("emit-gate", parents=[common, gate], help="print a standalone gate testbench netlist")
    s.add_argument("--gate", required=True)
    s.add_argument("--bias", metavar="FILE", help="bias JSON or tune report (default: tune first)")
    s.set_defaults(func=cmd_emit_gate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if not args.no_banner:
        print(f"jjlogic {__version__}", file=sys.stderr)
    try:
        return args.func(args)
    except SolverError as exc:
        # a singular system is a netlist defect (floating node), not a convergence failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, NetlistError, CardError, GateBuildError, InvalidTableError, DeviceStateError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
