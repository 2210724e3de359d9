"""Dense complex-matrix foundation.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Hermitian inputs
go through :func:`hermitian`, which checks conjugate symmetry and returns the
exactly symmetrized matrix so downstream eigensolvers see a true Hermitian.

Composite indices follow the row-major Kronecker convention: for subsystem
dimensions ``(d1, ..., dm)`` the index ``(i1, ..., im)`` maps to
``i1 * (d2 ... dm) + ... + im``. Block ``(i, j)`` of :func:`block` is therefore
the submatrix whose first-party row index is ``i`` and column index is ``j``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError, NumericalFailure

HERMITICITY_TOL = 1e-9
PSD_TOL = 1e-9
DEFAULT_MAX_DIM = 4096
MAX_DIM_ENV = "SEPBALL_MAX_DIM"


def max_dim() -> int:
    """Dense-storage cap on total dimension; ``SEPBALL_MAX_DIM`` overrides the default."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise DimensionError(f"{MAX_DIM_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise DimensionError(f"{MAX_DIM_ENV} must be positive, got {value}")
    return value


def _check_dim(n: int) -> None:
    cap = max_dim()
    if n > cap:
        raise DimensionError(f"total dimension {n} exceeds the dense cap {cap} (set {MAX_DIM_ENV})")


@dataclass(frozen=True)
class MultipartiteStructure:
    """Ordered subsystem dimensions ``(d1, ..., dm)``."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise DimensionError("a structure needs at least one party")
        if any(d < 2 for d in dims):
            raise DimensionError(f"every subsystem dimension must be >= 2, got {dims}")
        _check_dim(prod(dims))

    @classmethod
    def parse(cls, text: str) -> "MultipartiteStructure":
        """Parse ``"2,2,2"`` style strings."""
        try:
            dims = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise DimensionError(f"cannot parse structure {text!r}; expected e.g. 2,2,2") from None
        return cls(dims)

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def rest(self) -> "MultipartiteStructure":
        """Structure of parties 2..m."""
        if self.m < 2:
            raise DimensionError("a single-party structure has no remainder")
        return MultipartiteStructure(self.dims[1:])

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.dims)


def as_structure(s: MultipartiteStructure | Sequence[int]) -> MultipartiteStructure:
    if isinstance(s, MultipartiteStructure):
        return s
    return MultipartiteStructure(tuple(s))


def general(a) -> np.ndarray:
    """Coerce to a 2-D complex array (the non-Hermitian carrier)."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def hermitian(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate ``a`` as Hermitian within ``tol`` and return ``(a + a^H) / 2``.

    Raises
    ------
    DimensionError
        If ``a`` is not square, is empty, or exceeds the dense cap.
    NotHermitianError
        If some ``|a[i, j] - conj(a[j, i])|`` exceeds ``tol``.
    """
    arr = general(a)
    n, k = arr.shape
    if n != k or n < 1:
        raise DimensionError(f"expected a nonempty square matrix, got shape {arr.shape}")
    _check_dim(n)
    if not np.all(np.isfinite(arr)):
        raise NotHermitianError("matrix has non-finite entries")
    skew = np.max(np.abs(arr - arr.conj().T))
    if skew > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max |A - A^H| = {skew:.3e} > tol {tol:.1e}")
    return (arr + arr.conj().T) / 2


def is_hermitian(a, tol: float = HERMITICITY_TOL) -> bool:
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False
    return bool(np.max(np.abs(arr - arr.conj().T), initial=0.0) <= tol)


def eigvalsh(a: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    try:
        return np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Hermitian eigensolver failed: {exc}") from exc


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(general(a), "fro"))


def operator_norm(a) -> float:
    """Largest singular value; for Hermitian input, the largest ``|eigenvalue|``."""
    arr = general(a)
    if is_hermitian(arr, tol=0.0):
        w = eigvalsh(arr)
        return float(max(abs(w[0]), abs(w[-1])))
    try:
        return float(np.linalg.norm(arr, 2))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"singular value decomposition failed: {exc}") from exc


def tensor(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` under the row-major convention."""
    a, b = general(a), general(b)
    _check_dim(a.shape[0] * b.shape[0])
    return np.kron(a, b)


def tensor_all(factors: Iterable) -> np.ndarray:
    out = None
    for f in factors:
        out = general(f) if out is None else tensor(out, f)
    if out is None:
        raise DimensionError("tensor_all needs at least one factor")
    return out


def _check_matches(rho: np.ndarray, s: MultipartiteStructure) -> None:
    if rho.shape != (s.total_dim, s.total_dim):
        raise DimensionError(f"matrix of shape {rho.shape} does not match structure {s} (dim {s.total_dim})")


def block(rho, s: MultipartiteStructure | Sequence[int], i: int, j: int) -> np.ndarray:
    """Block ``rho^{i,j}`` of the first-party partition (0-based ``i``, ``j``)."""
    s = as_structure(s)
    rho = general(rho)
    _check_matches(rho, s)
    d1 = s.dims[0]
    if not (0 <= i < d1 and 0 <= j < d1):
        raise IndexError(f"block index ({i}, {j}) out of range for first party of dimension {d1}")
    n = s.total_dim // d1
    return rho[i * n:(i + 1) * n, j * n:(j + 1) * n].copy()


def is_psd(a, tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``a`` is at least ``-tol``."""
    return bool(eigvalsh(hermitian(a))[0] >= -tol)


def min_eigenvalue(a) -> float:
    return float(eigvalsh(hermitian(a))[0])


def partial_transpose(rho, s: MultipartiteStructure | Sequence[int], subset: Iterable[int]) -> np.ndarray:
    """Transpose the tensor indices of the parties in ``subset`` (0-based)."""
    s = as_structure(s)
    rho = general(rho)
    _check_matches(rho, s)
    parties = sorted(set(int(k) for k in subset))
    if not parties or len(parties) >= s.m or parties[0] < 0 or parties[-1] >= s.m:
        raise ValueError(f"subset {parties} must be a nonempty proper subset of parties 0..{s.m - 1}")
    m = s.m
    t = rho.reshape(s.dims + s.dims)
    axes = list(range(2 * m))
    for k in parties:
        axes[k], axes[m + k] = axes[m + k], axes[k]
    return t.transpose(axes).reshape(rho.shape)


def apply_blockwise(phi: Callable[[np.ndarray], np.ndarray], rho, s: MultipartiteStructure | Sequence[int]) -> np.ndarray:
    """Block matrix whose ``(i, j)`` block is ``phi(rho^{i,j})``.

    ``phi`` must map every ``(d2...dm) x (d2...dm)`` block to a ``K x K``
    matrix with the same ``K`` throughout.
    """
    s = as_structure(s)
    rho = general(rho)
    _check_matches(rho, s)
    d1 = s.dims[0]
    out = None
    k = None
    for i in range(d1):
        for j in range(d1):
            img = np.atleast_2d(np.asarray(phi(block(rho, s, i, j)), dtype=np.complex128))
            if img.ndim != 2 or img.shape[0] != img.shape[1]:
                raise DimensionError(f"phi produced a non-square image of shape {img.shape}")
            if k is None:
                k = img.shape[0]
                out = np.zeros((d1 * k, d1 * k), dtype=np.complex128)
            elif img.shape[0] != k:
                raise DimensionError(f"phi output shape {img.shape} inconsistent with earlier {(k, k)}")
            out[i * k:(i + 1) * k, j * k:(j + 1) * k] = img
    return out


def partial_trace(rho, s: MultipartiteStructure | Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced matrix on the parties in ``keep`` (0-based, kept in order)."""
    s = as_structure(s)
    rho = general(rho)
    _check_matches(rho, s)
    keep = sorted(set(int(k) for k in keep))
    m = s.m
    t = rho.reshape(s.dims + s.dims)
    for k in reversed(range(m)):
        if k not in keep:
            t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
    kd = prod(s.dims[k] for k in keep) if keep else 1
    return t.reshape(kd, kd)


def purity(rho) -> float:
    """``tr rho^2``, computed as the squared Frobenius norm."""
    arr = hermitian(rho)
    return float(np.vdot(arr, arr).real)
