import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepball.errors import DimensionError, NotHermitianError
from sepball.hermitian import (
    MultipartiteStructure,
    apply_blockwise,
    block,
    frobenius_norm,
    hermitian,
    is_psd,
    max_dim,
    operator_norm,
    partial_trace,
    partial_transpose,
    purity,
    tensor,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def rand_herm(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def brute_partial_transpose(rho, dims, subset):
    """Entry-by-entry index swap, independent of the reshape path."""
    n = rho.shape[0]
    out = np.empty_like(rho)

    def digits(r):
        ds = []
        for d in reversed(dims):
            ds.append(r % d)
            r //= d
        return ds[::-1]

    def index(ds):
        r = 0
        for d, v in zip(dims, ds):
            r = r * d + v
        return r

    for r in range(n):
        for c in range(n):
            dr, dc = digits(r), digits(c)
            for k in subset:
                dr[k], dc[k] = dc[k], dr[k]
            out[index(dr), index(dc)] = rho[r, c]
    return out


class TestConstruction:
    def test_symmetrizes_within_tol(self):
        a = np.array([[1, 1 + 1e-11], [1, 2]], dtype=complex)
        h = hermitian(a)
        assert np.array_equal(h, h.conj().T)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            hermitian([[1, 2], [0, 1]])

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            hermitian(np.zeros((2, 3)))

    def test_structure(self):
        s = MultipartiteStructure.parse("2,3,2")
        assert (s.m, s.total_dim, s.dims) == (3, 12, (2, 3, 2))
        with pytest.raises(DimensionError):
            MultipartiteStructure((2, 1))

    def test_max_dim_env(self, monkeypatch):
        assert max_dim() == 4096
        monkeypatch.setenv("SEPBALL_MAX_DIM", "8")
        with pytest.raises(DimensionError):
            MultipartiteStructure((2, 2, 2, 2))
        with pytest.raises(DimensionError):
            tensor(np.eye(4), np.eye(4))


class TestNorms:
    @pytest.mark.parametrize("a", [np.eye(2), np.diag([1, 1j]), SX])
    def test_frobenius_sqrt2(self, a):
        assert frobenius_norm(a) == pytest.approx(math.sqrt(2), abs=1e-15)

    def test_operator_norm(self):
        assert operator_norm(np.eye(5)) == pytest.approx(1)
        assert operator_norm(np.diag([3.0, -1.0])) == pytest.approx(3)

    def test_operator_norm_non_hermitian(self):
        # phi(Y) = diag(1,-1) + i sigma_x has singular values 2 and 0
        assert operator_norm(SZ + 1j * SX) == pytest.approx(2, abs=1e-14)

    def test_norm_relations_random(self, rng):
        for _ in range(1000):
            a = rand_herm(int(rng.integers(1, 5)), rng)
            b = rand_herm(int(rng.integers(1, 5)), rng)
            lhs = frobenius_norm(tensor(a, b))
            assert lhs == pytest.approx(frobenius_norm(a) * frobenius_norm(b), rel=1e-10)
            assert operator_norm(a) <= frobenius_norm(a) * (1 + 1e-10)


class TestTensorAndBlocks:
    def test_identity(self):
        assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_row_major_entry(self):
        assert tensor(SX, SZ)[0, 2] == 1

    def test_block_of_product(self, rng):
        a, b = rand_herm(3, rng), rand_herm(2, rng)
        rho = tensor(a, b)
        s = MultipartiteStructure((3, 2))
        for i in range(3):
            for j in range(3):
                # oracle: read entries by explicit composite index i*2 + k
                expect = np.array([[rho[i * 2 + k, j * 2 + l] for l in range(2)] for k in range(2)])
                assert np.allclose(block(rho, s, i, j), expect)
                assert np.allclose(block(rho, s, i, j), a[i, j] * b)

    def test_block_identity(self):
        s = MultipartiteStructure((2, 2, 2))
        assert np.array_equal(block(np.eye(8), s, 1, 1), np.eye(4))
        assert np.array_equal(block(np.eye(8), s, 0, 1), np.zeros((4, 4)))

    def test_block_conjugate_symmetry(self, rng):
        rho = rand_herm(6, rng)
        s = MultipartiteStructure((3, 2))
        for i in range(3):
            for j in range(3):
                assert np.allclose(block(rho, s, i, j), block(rho, s, j, i).conj().T)

    def test_block_index_range(self):
        with pytest.raises(IndexError):
            block(np.eye(4), (2, 2), 2, 0)


class TestPsd:
    def test_identity(self):
        assert is_psd(np.eye(3))

    def test_small_negative(self):
        assert not is_psd(np.diag([1, -1e-6]), tol=1e-9)

    def test_shifted_perturbation(self, rng):
        d = rand_herm(5, rng)
        d *= 0.999 / operator_norm(d)
        assert is_psd(np.eye(5) + d)


class TestPartialTranspose:
    def test_product(self, rng):
        a, b = rand_herm(2, rng), rand_herm(3, rng)
        assert np.allclose(partial_transpose(tensor(a, b), (2, 3), [1]), tensor(a, b.T))

    def test_involution(self, rng):
        rho = rand_herm(12, rng)
        s = (2, 3, 2)
        for subset in ([0], [1], [2], [0, 2]):
            assert np.allclose(partial_transpose(partial_transpose(rho, s, subset), s, subset), rho)

    def test_matches_brute_force(self, rng):
        rho = rand_herm(12, rng)
        for subset in ([0], [1], [2], [0, 1], [1, 2]):
            assert np.allclose(partial_transpose(rho, (2, 3, 2), subset),
                               brute_partial_transpose(rho, (2, 3, 2), subset))

    def test_bell(self):
        psi = np.array([1, 0, 0, 1]) / math.sqrt(2)
        rho = np.outer(psi, psi)
        pt = partial_transpose(rho, (2, 2), [1])
        assert np.allclose(pt, brute_partial_transpose(rho, (2, 2), [1]))
        assert np.linalg.eigvalsh(pt)[0] == pytest.approx(-0.5, abs=1e-14)

    @pytest.mark.parametrize("subset", [[], [0, 1], [5]])
    def test_invalid_subset(self, subset):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(4), (2, 2), subset)


class TestBlockwise:
    def test_identity_map(self, rng):
        rho = rand_herm(8, rng)
        assert np.allclose(apply_blockwise(lambda x: x, rho, (2, 2, 2)), rho)

    def test_transpose_map(self, rng):
        rho = rand_herm(8, rng)
        s = (2, 2, 2)
        assert np.allclose(apply_blockwise(lambda x: x.T, rho, s), partial_transpose(rho, s, [1, 2]))

    def test_trace_map(self, rng):
        rho = rand_herm(6, rng)
        reduced = apply_blockwise(lambda x: np.trace(x), rho, (3, 2))
        # oracle: sum the diagonal of the second-party index
        expect = np.array([[sum(rho[i * 2 + k, j * 2 + k] for k in range(2)) for j in range(3)] for i in range(3)])
        assert np.allclose(reduced, expect)
        assert np.allclose(reduced, partial_trace(rho, (3, 2), [0]))

    def test_inconsistent_shapes(self):
        calls = iter(range(10))
        with pytest.raises(DimensionError):
            apply_blockwise(lambda x: np.eye(1 + next(calls) % 2), np.eye(4), (2, 2))


class TestPurity:
    def test_values(self):
        assert purity(np.eye(4) / 4) == pytest.approx(0.25)
        psi = np.array([1, 1j]) / math.sqrt(2)
        assert purity(np.outer(psi, psi.conj())) == pytest.approx(1)

    @pytest.mark.parametrize("eta", [1e-5, 0.3, 0.9])
    def test_thermal_qubit(self, eta):
        assert purity(np.diag([(1 + eta) / 2, (1 - eta) / 2])) == pytest.approx((1 + eta**2) / 2, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_tensor_hermitian_and_multiplicative(n, k, seed):
    rng = np.random.default_rng(seed)
    a, b = rand_herm(n, rng), rand_herm(k, rng)
    t = tensor(a, b)
    assert np.allclose(t, t.conj().T)
    assert frobenius_norm(t) == pytest.approx(frobenius_norm(a) * frobenius_norm(b), rel=1e-10)
