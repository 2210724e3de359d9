"""Pure-numpy reference implementation of the hot kernels.

Selected at import when the compiled ``_kernels`` extension is unavailable,
or when ``SEPBALL_PURE_PYTHON=1``. Signatures match the extension exactly.
"""

from __future__ import annotations

import numpy as np


def _offsets(dims) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(dims)]).astype(np.intp)


def party_matrix(R: np.ndarray, dims, x: np.ndarray, k: int) -> np.ndarray:
    """Contract ``R`` with ``conj(x_j)`` on rows and ``x_j`` on columns for every party ``j != k``."""
    dims = tuple(int(d) for d in dims)
    m = len(dims)
    off = _offsets(dims)
    t = R.reshape(dims + dims)
    # bring party k to the front on both sides
    order = [k] + [j for j in range(m) if j != k]
    t = t.transpose(order + [m + j for j in order])
    dk = dims[k]
    rest = R.shape[0] // dk
    t = t.reshape(dk, rest, dk, rest)
    v = np.ones(1, dtype=np.complex128)
    for j in order[1:]:
        v = np.kron(v, x[off[j]:off[j + 1]])
    return np.einsum("aibj,i,j->ab", t, v.conj(), v)


def ascend_product(R: np.ndarray, dims, x0: np.ndarray, sweeps: int = 50, tol: float = 1e-14):
    """Alternating maximization of ``<x|R|x>`` over product unit vectors.

    ``x0`` and the returned vector are the party vectors concatenated.
    Returns ``(value, x)``.
    """
    dims = tuple(int(d) for d in dims)
    off = _offsets(dims)
    x = np.array(x0, dtype=np.complex128, copy=True)
    value = -np.inf
    for _ in range(sweeps):
        prev = value
        for k in range(len(dims)):
            mk = party_matrix(R, dims, x, k)
            w, v = np.linalg.eigh((mk + mk.conj().T) / 2)
            x[off[k]:off[k + 1]] = v[:, -1]
            value = float(w[-1])
        if abs(value - prev) <= tol * max(1.0, abs(value)):
            break
    return value, x
