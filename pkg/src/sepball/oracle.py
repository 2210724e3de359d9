"""Desk-scale ground truth for the ball certificates.

``ppt_check`` is the partial-transpose test on every bipartition; it is a
necessary condition for separability, and exact for two parties of
dimensions 2x2 or 2x3. ``search_decomposition`` constructs an explicit
mixture of product states by greedy fitting. When it runs out of budget the
result is marked ``exhausted``, which is NOT evidence of entanglement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from . import kernels
from .errors import DimensionError
from .hermitian import (
    MultipartiteStructure,
    as_structure,
    eigvalsh,
    frobenius_norm,
    hermitian,
    operator_norm,
    partial_transpose,
    tensor_all,
)
from .matrixio import matrix_to_obj

PPT_TOL = 1e-9
SEARCH_MAX_DIM = 64


def bipartitions(m: int) -> list[tuple[int, ...]]:
    """One side of every split of ``m`` parties into two nonempty groups.

    Each split is listed once, by the side containing party 0.
    """
    rest = range(1, m)
    out = []
    for size in range(0, m - 1):
        for combo in itertools.combinations(rest, size):
            out.append((0,) + combo)
    return out


def ppt_min_eigenvalues(rho, s: MultipartiteStructure | Sequence[int]) -> dict[tuple[int, ...], float]:
    s = as_structure(s)
    rho = hermitian(rho)
    return {side: float(eigvalsh(partial_transpose(rho, s, side))[0]) for side in bipartitions(s.m)}


def ppt_check(rho, s: MultipartiteStructure | Sequence[int], tol: float = PPT_TOL) -> dict[tuple[int, ...], bool]:
    """Whether the partial transpose is PSD (within ``tol``) for every bipartition."""
    return {side: ev >= -tol for side, ev in ppt_min_eigenvalues(rho, s).items()}


def ppt_is_exact(s: MultipartiteStructure | Sequence[int]) -> bool:
    """True when PPT is equivalent to separability (2x2, 2x3, 3x2)."""
    s = as_structure(s)
    return s.m == 2 and sorted(s.dims) in ([2, 2], [2, 3])


@dataclass
class Decomposition:
    """``rho ~ sum_i weights[i] * kron(factors[i])`` with pure-state factors.

    ``exhausted`` means the budget ran out before ``reconstruction_error``
    reached the tolerance; it does not certify entanglement.
    """

    weights: np.ndarray
    factors: list[list[np.ndarray]]
    reconstruction_error: float
    exhausted: bool
    iterations: int
    structure: MultipartiteStructure = field(repr=False, default=None)

    @property
    def succeeded(self) -> bool:
        return not self.exhausted

    def reconstruct(self) -> np.ndarray:
        n = self.structure.total_dim
        out = np.zeros((n, n), dtype=np.complex128)
        for w, fs in zip(self.weights, self.factors):
            out += w * tensor_all(fs)
        return out

    def to_dict(self) -> dict:
        return {
            "structure": list(self.structure.dims),
            "weights": [float(w) for w in self.weights],
            "factors": [[matrix_to_obj(f) for f in fs] for fs in self.factors],
            "reconstruction_error": float(self.reconstruction_error),
            "exhausted": bool(self.exhausted),
            "iterations": int(self.iterations),
        }


def _realify(a: np.ndarray) -> np.ndarray:
    return np.concatenate([a.real.ravel(), a.imag.ravel()])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _kron_vec(parts: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(1, dtype=np.complex128)
    for p in parts:
        out = np.kron(out, p)
    return out


def _split(x: np.ndarray, dims: tuple[int, ...]) -> list[np.ndarray]:
    return np.split(x, np.cumsum(dims)[:-1])


def _eigvec_start(R: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    # per-party leading singular vector of the top eigenvector of R
    _, vecs = np.linalg.eigh(R)
    t = vecs[:, -1].reshape(dims)
    parts = []
    for k in range(len(dims)):
        u, _, _ = np.linalg.svd(np.moveaxis(t, k, 0).reshape(dims[k], -1), full_matrices=False)
        parts.append(u[:, 0])
    return np.concatenate(parts)


def _random_start(dims: tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    return np.concatenate([_unit(rng.standard_normal(d) + 1j * rng.standard_normal(d)) for d in dims])


def best_product_state(R, dims: Sequence[int], rng: np.random.Generator, restarts: int = 2,
                       sweeps: int = 50) -> tuple[float, list[np.ndarray]]:
    """Approximate maximizer of ``<x|R|x>`` over product unit vectors.

    Runs the alternating ascent from the eigenvector-derived start and from
    ``restarts`` random starts; returns the best ``(value, party_vectors)``.
    """
    dims = tuple(int(d) for d in dims)
    R = np.ascontiguousarray(R, dtype=np.complex128)
    best_val, best_x = -np.inf, None
    starts = [_eigvec_start(R, dims)] + [_random_start(dims, rng) for _ in range(restarts)]
    for x0 in starts:
        val, x = kernels.ascend_product(R, dims, x0, sweeps)
        if val > best_val:
            best_val, best_x = val, x
    return float(best_val), [_unit(p) for p in _split(best_x, dims)]


def search_decomposition(rho, s: MultipartiteStructure | Sequence[int], budget: int = 10_000,
                         tol: float = 1e-6, seed: int | None = 0, restarts: int = 2,
                         sweeps: int = 50, refit_every: int = 10) -> Decomposition:
    """Greedy product-state fitting of a (possibly unnormalized) PSD matrix.

    Each iteration adds the product state with the largest overlap with the
    current residual, weighted by that overlap. Every ``refit_every`` atoms
    the weights of all collected atoms are re-solved by nonnegative least
    squares and zero-weight atoms are dropped. Stops once the Frobenius
    residual is at most ``tol`` or after ``budget`` atoms.
    """
    s = as_structure(s)
    rho = hermitian(rho)
    if s.total_dim > SEARCH_MAX_DIM:
        raise DimensionError(f"decomposition search supports total dimension <= {SEARCH_MAX_DIM}, got {s.total_dim}")
    if rho.shape[0] != s.total_dim:
        raise DimensionError(f"matrix dimension {rho.shape[0]} does not match structure {s}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    dims = s.dims
    rng = np.random.Generator(np.random.PCG64(seed))
    target = _realify(rho)
    trace_row = float(np.trace(rho).real)

    vectors: list[list[np.ndarray]] = []
    columns: list[np.ndarray] = []
    weights = np.zeros(0)
    approx = np.zeros_like(rho)
    err = frobenius_norm(rho)

    def refit():
        nonlocal vectors, columns, weights, approx
        # unit-trace atoms: the extra row pins sum(weights) to tr rho
        a = np.column_stack(columns)
        a = np.vstack([a, np.ones(a.shape[1])])
        w, _ = nnls(a, np.append(target, trace_row), maxiter=max(100, 10 * a.shape[1]))
        keep = w > 0
        vectors = [v for v, k in zip(vectors, keep) if k]
        columns = [c for c, k in zip(columns, keep) if k]
        weights = w[keep]
        approx = np.zeros_like(rho)
        for wi, parts in zip(weights, vectors):
            x = _kron_vec(parts)
            approx += wi * np.outer(x, x.conj())

    it = 0
    while it < budget and err > tol:
        it += 1
        value, parts = best_product_state(rho - approx, dims, rng, restarts, sweeps)
        x = _kron_vec(parts)
        atom = np.outer(x, x.conj())
        vectors.append(parts)
        columns.append(_realify(atom))
        step = max(value, 0.0)
        weights = np.append(weights, step)
        approx = approx + step * atom
        if it % refit_every == 0 or value <= 0:
            refit()
        err = frobenius_norm(rho - approx)
    if columns:
        refit()
        err = frobenius_norm(rho - approx)
    factors = [[np.outer(p, p.conj()) for p in parts] for parts in vectors]
    return Decomposition(weights, factors, err, err > tol, it, s)


def verify_decomposition(rho, dec: Decomposition) -> float:
    """Recompute the Frobenius reconstruction error independently of the search."""
    return frobenius_norm(hermitian(rho) - dec.reconstruct())


# Fixture showing the sqrt(2) factor is attained for a non-Hermitian argument.
FIXTURE_A1 = np.diag([1.0, -1.0]).astype(np.complex128)
FIXTURE_A2 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
FIXTURE_Y = np.diag([1.0, 1j])


def fixture_map(x: np.ndarray) -> np.ndarray:
    """``X -> X[0, 0] * diag(1, -1) + X[1, 1] * sigma_x``."""
    x = np.asarray(x, dtype=np.complex128)
    return x[0, 0] * FIXTURE_A1 + x[1, 1] * FIXTURE_A2


def sqrt2_fixture() -> dict[str, float]:
    image = fixture_map(FIXTURE_Y)
    return {
        "y_frobenius_sq": frobenius_norm(FIXTURE_Y) ** 2,
        "image_operator_sq": operator_norm(image) ** 2,
        "image_frobenius_sq": frobenius_norm(image) ** 2,
        "image_det_abs": float(abs(np.linalg.det(image))),
    }


def sqrt2_fixture_check(tol: float = 1e-12) -> bool:
    vals = sqrt2_fixture()
    return abs(vals["y_frobenius_sq"] - 2) <= tol and abs(vals["image_operator_sq"] - 4) <= tol
