import numpy as np
import pytest

from jjlogic.netlist import elaborate, parse_file
from jjlogic.solver import available_backends, backend_name, solve_dc, use_backend
from jjlogic.solver import _mna_py

from oracles import FIXTURES


def test_python_always_available():
    assert "python" in available_backends()
    assert backend_name() in available_backends()


def test_unknown_backend():
    with pytest.raises(ValueError):
        with use_backend("fortran"):
            pass


@pytest.mark.skipif("cython" not in available_backends(), reason="compiled extension not built")
@pytest.mark.parametrize("name", ["gate_xor2.net", "gate_copy.net", "hierarchy.net", "ntron_forced.net"])
def test_backends_agree(name):
    c = elaborate(parse_file(FIXTURES / name), base_dir=FIXTURES)
    with use_backend("python"):
        a = solve_dc(c)
    with use_backend("cython"):
        b = solve_dc(c)
    assert a.device_states == b.device_states
    for n in a.node_voltages:
        assert b.v(n) == pytest.approx(a.v(n), rel=1e-12, abs=1e-15)


@pytest.mark.skipif("cython" not in available_backends(), reason="compiled extension not built")
def test_kernels_agree_random():
    from jjlogic.solver import _mna_ext

    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 12))
        A = rng.normal(size=(n, n)) + n * np.eye(n)
        b = rng.normal(size=n)
        assert np.allclose(_mna_ext.lu_solve(A, b), _mna_py.lu_solve(A, b), rtol=1e-12, atol=1e-14)
        assert np.allclose(_mna_py.lu_solve(A, b), np.linalg.solve(A, b), rtol=1e-10, atol=1e-12)


def test_singular_pivot():
    with pytest.raises(np.linalg.LinAlgError):
        _mna_py.lu_solve(np.zeros((2, 2)), np.ones(2))
