"""Reference MNA kernels in numpy; used when the compiled extension is absent.

Node index 0 is ground and has no row.  Row ``k - 1`` holds KCL for node
``k``; rows ``n_nodes - 1 + j`` hold the constraint of voltage source ``j``.
"""
import numpy as np
from numpy.linalg import LinAlgError

PIVOT_RTOL = 1e-14


def stamp(n_nodes, g_a, g_b, g_val, i_a, i_b, i_val, v_a, v_b, v_val):
    nn = n_nodes - 1
    dim = nn + len(v_a)
    A = np.zeros((dim + 1, dim + 1))  # extra row/col 0 absorbs ground stamps
    rhs = np.zeros(dim + 1)
    a = np.asarray(g_a, dtype=np.intp)
    b = np.asarray(g_b, dtype=np.intp)
    g = np.asarray(g_val, dtype=float)
    np.add.at(A, (a, a), g)
    np.add.at(A, (b, b), g)
    np.add.at(A, (a, b), -g)
    np.add.at(A, (b, a), -g)
    np.add.at(rhs, np.asarray(i_a, dtype=np.intp), -np.asarray(i_val, dtype=float))
    np.add.at(rhs, np.asarray(i_b, dtype=np.intp), np.asarray(i_val, dtype=float))
    k = np.arange(len(v_a), dtype=np.intp) + nn + 1
    va = np.asarray(v_a, dtype=np.intp)
    vb = np.asarray(v_b, dtype=np.intp)
    np.add.at(A, (va, k), 1.0)
    np.add.at(A, (vb, k), -1.0)
    np.add.at(A, (k, va), 1.0)
    np.add.at(A, (k, vb), -1.0)
    rhs[k] = v_val
    return A[1:, 1:].copy(), rhs[1:].copy()


def lu_solve(A, b):
    """Gaussian elimination with partial pivoting.

    Raises ``LinAlgError`` when a pivot falls below ``PIVOT_RTOL * max|A|``.
    """
    M = np.array(A, dtype=float)
    x = np.array(b, dtype=float)
    n = M.shape[0]
    if n == 0:
        return x
    tol = PIVOT_RTOL * np.abs(M).max()
    for k in range(n):
        p = k + int(np.argmax(np.abs(M[k:, k])))
        if not abs(M[p, k]) > tol:
            raise LinAlgError(f"singular matrix at pivot {k}")
        if p != k:
            M[[k, p]] = M[[p, k]]
            x[k], x[p] = x[p], x[k]
        if k + 1 < n:
            f = M[k + 1:, k] / M[k, k]
            M[k + 1:, k:] -= np.outer(f, M[k, k:])
            x[k + 1:] -= f * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - M[k, k + 1:] @ x[k + 1:]) / M[k, k]
    return x
