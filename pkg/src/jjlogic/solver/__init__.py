"""MNA solver: DC state relaxation and quasi-static transient."""
from ._backend import available_backends, backend_name, set_backend, use_backend
from .dc import MAX_ITER, VOLTAGE_TOL, Solution, add_observer, kcl_residual, remove_observer, solve_dc, state_violations
from .mna import (
    SUPERCONDUCTING_FLOOR,
    LinearSystem,
    SingularCircuitError,
    SolverError,
    assemble,
    floating_nodes,
    initial_states,
    solve_linear,
)
from .output import solution_to_dict, solution_to_json, waveforms_to_csv
from .transient import Waveforms, resolve_probes, run_transient, time_axis

__all__ = [
    "available_backends",
    "backend_name",
    "set_backend",
    "use_backend",
    "MAX_ITER",
    "VOLTAGE_TOL",
    "Solution",
    "add_observer",
    "remove_observer",
    "kcl_residual",
    "solve_dc",
    "state_violations",
    "SUPERCONDUCTING_FLOOR",
    "LinearSystem",
    "SingularCircuitError",
    "SolverError",
    "assemble",
    "floating_nodes",
    "initial_states",
    "solve_linear",
    "solution_to_dict",
    "solution_to_json",
    "waveforms_to_csv",
    "Waveforms",
    "resolve_probes",
    "run_transient",
    "time_axis",
]
