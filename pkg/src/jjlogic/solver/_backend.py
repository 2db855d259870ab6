"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
reference kernels are used.  :func:`use_backend` switches explicitly, which
the test-suite and the benchmark rely on to compare the two.
"""
from contextlib import contextmanager

from . import _mna_py

try:
    from . import _mna_ext
except ImportError:  # extension not built
    _mna_ext = None

_BACKENDS = {"python": _mna_py}
if _mna_ext is not None:
    _BACKENDS["cython"] = _mna_ext

_active = _BACKENDS.get("cython", _mna_py)


def available_backends():
    return sorted(_BACKENDS)


def backend_name() -> str:
    return "cython" if _active is _mna_ext else "python"


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    _active = _BACKENDS[name]


@contextmanager
def use_backend(name: str):
    previous = backend_name()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def stamp(*args):
    return _active.stamp(*args)


def lu_solve(A, b):
    return _active.lu_solve(A, b)
