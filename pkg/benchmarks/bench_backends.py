"""Compare the compiled and numpy MNA kernels.

Times the raw kernels (stamp + LU solve on a random resistor ladder) and full
DC solves of every gate netlist under each backend.

    python3 benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import timeit
from pathlib import Path

import numpy as np

from jjlogic.netlist import elaborate, parse_file
from jjlogic.solver import _backend, available_backends, solve_dc, use_backend

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def ladder(n, rng):
    """Stamp arguments for an n-node random ladder driven by one V and one I source."""
    a = np.arange(1, n, dtype=np.intp)
    g_a = np.concatenate([a, a])
    g_b = np.concatenate([a + 1, np.zeros(n - 1, dtype=np.intp)])
    g_val = rng.uniform(1e-5, 1e-3, size=g_a.size)
    idx = lambda *v: np.array(v, dtype=np.intp)
    return (n + 1, g_a, g_b, g_val, idx(0), idx(n), np.array([35e-6]), idx(1), idx(0), np.array([-0.7]))


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    names = available_backends()
    if "cython" not in names:
        print("compiled extension not built; timing the numpy kernels only")

    rng = np.random.default_rng(0)
    cases = [(f"kernel n={n}", ladder(n, rng)) for n in (8, 32, 128)]
    gates = [(p.stem, elaborate(parse_file(p))) for p in sorted(FIXTURES.glob("gate_*.net"))]

    header = f"{'case':<18}" + "".join(f"{n + ' [us]':>16}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for label, stamp_args in cases:
        row = []
        for name in names:
            with use_backend(name):
                number = 2000 if stamp_args[0] < 64 else 200
                row.append(best(lambda: _backend.lu_solve(*_backend.stamp(*stamp_args)), args.repeat, number))
        print(_line(label, row))
    for label, circuit in gates:
        row = []
        for name in names:
            with use_backend(name):
                row.append(best(lambda: solve_dc(circuit), args.repeat, 200))
        print(_line(label, row))


def _line(label, times):
    s = f"{label:<18}" + "".join(f"{t * 1e6:>16.1f}" for t in times)
    if len(times) > 1:
        s += f"{times[1] / times[0]:>9.1f}x"  # backends sort as (cython, python)
    return s


if __name__ == "__main__":
    main()
