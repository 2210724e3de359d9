# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels for the product-state ascent.

Mirrors ``_kernels_py`` exactly; the top eigenvector of each small party
matrix comes from LAPACK ``zheev`` via scipy's Cython bindings.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from scipy.linalg.cython_lapack cimport zheev

cnp.import_array()


cdef void _digits(cnp.intp_t[:, ::1] dig, cnp.intp_t[::1] dims, Py_ssize_t n):
    cdef Py_ssize_t r, j, rem
    cdef Py_ssize_t m = dims.shape[0]
    for r in range(n):
        rem = r
        for j in range(m - 1, -1, -1):
            dig[r, j] = rem % dims[j]
            rem = rem // dims[j]


cdef void _party_matrix(const double complex[:, ::1] R, cnp.intp_t[:, ::1] dig,
                        cnp.intp_t[::1] off, double complex[::1] x, Py_ssize_t k,
                        double complex[::1] u, double complex[::1] buf, Py_ssize_t dk) noexcept nogil:
    # buf is column-major: buf[a + b*dk] = M[a, b]
    cdef Py_ssize_t n = R.shape[0]
    cdef Py_ssize_t m = off.shape[0] - 1
    cdef Py_ssize_t r, c, j, a
    cdef double complex p, cr
    for r in range(n):
        p = 1.0
        for j in range(m):
            if j != k:
                p = p * x[off[j] + dig[r, j]]
        u[r] = p
    for a in range(dk * dk):
        buf[a] = 0.0
    for r in range(n):
        cr = u[r].conjugate()
        a = dig[r, k]
        for c in range(n):
            buf[a + dig[c, k] * dk] += cr * R[r, c] * u[c]


def party_matrix(R, dims, x, Py_ssize_t k):
    """Contract ``R`` with ``conj(x_j)`` on rows and ``x_j`` on columns for every party ``j != k``."""
    cdef double complex[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.complex128)
    cdef cnp.intp_t[::1] dv = np.asarray(dims, dtype=np.intp)
    cdef cnp.intp_t[::1] off = np.concatenate([[0], np.cumsum(dv)]).astype(np.intp)
    cdef Py_ssize_t n = Rv.shape[0]
    cdef cnp.intp_t[:, ::1] dig = np.empty((n, dv.shape[0]), dtype=np.intp)
    _digits(dig, dv, n)
    cdef double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef Py_ssize_t dk = dv[k]
    u = np.empty(n, dtype=np.complex128)
    buf = np.empty(dk * dk, dtype=np.complex128)
    _party_matrix(Rv, dig, off, xv, k, u, buf, dk)
    return buf.reshape(dk, dk).T.copy()


def ascend_product(R, dims, x0, int sweeps=50, double tol=1e-14):
    """Alternating maximization of ``<x|R|x>`` over product unit vectors.

    ``x0`` and the returned vector are the party vectors concatenated.
    Returns ``(value, x)``.
    """
    cdef double complex[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.complex128)
    cdef cnp.intp_t[::1] dv = np.asarray(dims, dtype=np.intp)
    cdef cnp.intp_t[::1] off = np.concatenate([[0], np.cumsum(dv)]).astype(np.intp)
    cdef Py_ssize_t n = Rv.shape[0]
    cdef Py_ssize_t m = dv.shape[0]
    cdef cnp.intp_t[:, ::1] dig = np.empty((n, m), dtype=np.intp)
    _digits(dig, dv, n)
    xa = np.array(x0, dtype=np.complex128, copy=True)
    cdef double complex[::1] x = xa
    cdef Py_ssize_t dmax = int(np.max(np.asarray(dv)))
    cdef double complex[::1] u = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] buf = np.empty(dmax * dmax, dtype=np.complex128)
    cdef double[::1] w = np.empty(dmax, dtype=np.float64)
    cdef int lwork = 2 * <int>dmax + 1
    cdef double complex[::1] work = np.empty(lwork, dtype=np.complex128)
    cdef double[::1] rwork = np.empty(3 * dmax, dtype=np.float64)
    cdef int nk, lda
    cdef int info = 0
    cdef char jobz = b'V'
    cdef char uplo = b'U'
    cdef double value = -np.inf
    cdef double prev, scale
    cdef Py_ssize_t s, k, i
    with nogil:
        for s in range(sweeps):
            prev = value
            for k in range(m):
                nk = <int>dv[k]
                lda = nk
                _party_matrix(Rv, dig, off, x, k, u, buf, dv[k])
                zheev(&jobz, &uplo, &nk, &buf[0], &lda, &w[0], &work[0], &lwork, &rwork[0], &info)
                if info != 0:
                    break
                for i in range(nk):
                    x[off[k] + i] = buf[i + (nk - 1) * nk]
                value = w[nk - 1]
            if info != 0:
                break
            scale = fabs(value)
            if scale < 1.0:
                scale = 1.0
            if fabs(value - prev) <= tol * scale:
                break
    if info != 0:
        raise ArithmeticError(f"zheev failed with info={info}")
    return value, xa
