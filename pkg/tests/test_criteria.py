import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepball.criteria import (
    PseudopureBound,
    Verdict,
    certify_normalized,
    certify_real_separable,
    certify_unnormalized,
    in_g_cone,
    in_rlin,
    mu,
    normalized_radii,
    pseudopure_threshold,
    scaling_report,
    separable_ball_radius,
)
from sepball.errors import DimensionError, TraceError
from sepball.hermitian import is_psd, tensor
from sepball.oracle import ppt_check
from sepball.states import random_ball_state, random_ginibre, random_hermitian_direction, werner

SY = np.array([[0, -1j], [1j, 0]])


def grid_mu(x):
    """Minimize ||x/alpha - I||_2 over alpha by successively refined grids."""
    n = x.shape[0]
    lo, hi = 1e-6, 4 * np.trace(x).real
    for _ in range(12):
        alphas = np.linspace(lo, hi, 401)
        vals = [np.linalg.norm(x / a - np.eye(n)) for a in alphas]
        k = int(np.argmin(vals))
        lo, hi = alphas[max(k - 2, 0)], alphas[min(k + 2, 400)]
    return min(vals)


def rand_real_sym(n, rng):
    g = rng.standard_normal((n, n))
    return (g + g.T) / 2


class TestMu:
    @pytest.mark.parametrize("d", [2, 4, 7])
    def test_maximally_mixed(self, d):
        assert mu(np.eye(d) / d) == pytest.approx(0, abs=1e-12)

    def test_pure_d4(self):
        psi = np.array([1, 2, 0, 1j]) / math.sqrt(6)
        x = np.outer(psi, psi.conj())
        assert mu(x) == pytest.approx(math.sqrt(3), abs=1e-12)
        assert grid_mu(x) == pytest.approx(math.sqrt(3), abs=1e-8)

    @pytest.mark.parametrize("eta", [1e-3, 0.2, 0.7])
    def test_thermal_qubit(self, eta):
        x = np.diag([(1 + eta) / 2, (1 - eta) / 2])
        expect = math.sqrt(2 * eta**2 / (1 + eta**2))
        assert mu(x) == pytest.approx(expect, rel=1e-12)
        assert grid_mu(x) == pytest.approx(expect, abs=1e-8)

    def test_matches_grid_oracle_random(self, rng):
        for _ in range(5):
            x = random_ginibre(4, rng, rank=int(rng.integers(1, 5))) * rng.uniform(0.5, 3)
            assert mu(x) == pytest.approx(grid_mu(x), abs=1e-8)

    def test_nonpositive_trace(self):
        with pytest.raises(TraceError):
            mu(np.diag([1.0, -2.0]))

    def test_scaling_invariance(self, rng):
        x = random_ginibre(6, rng)
        for lam in (1e-3, 0.5, 7.0, 1e4):
            assert mu(lam * x) == pytest.approx(mu(x), abs=1e-12)
            assert in_g_cone(lam * x, 0.9) == in_g_cone(x, 0.9)


class TestCone:
    def test_identity(self):
        for a in (0.1, 1, 5):
            assert in_g_cone(np.eye(3), a)

    def test_zero(self):
        assert in_g_cone(np.zeros((3, 3)), 0.5)

    def test_scaled_ball_point(self, rng):
        a = 0.7
        delta = random_hermitian_direction(4, rng, traceless=True) * a
        assert in_g_cone(2 * (np.eye(4) + delta), a)

    def test_closed_boundary(self, rng):
        # the optimal scale leaves tr(Delta) = -||Delta||^2; build such a Delta with norm a
        a, n = 0.7, 4
        d0 = random_hermitian_direction(n, rng, traceless=True) * math.sqrt(a**2 - a**4 / n)
        delta = d0 - (a**2 / n) * np.eye(n)
        assert np.linalg.norm(delta) == pytest.approx(a, rel=1e-15)
        x = 2 * (np.eye(n) + delta)
        assert mu(x) == pytest.approx(a, rel=1e-13)
        assert in_g_cone(x, a)
        assert not in_g_cone(x, a * (1 - 1e-9))

    def test_pure_state_outside(self):
        psi = np.array([1, 0, 0, 0])
        assert not in_g_cone(np.outer(psi, psi), 1.0)

    def test_negative_trace_excluded(self):
        assert not in_g_cone(-np.eye(2), 1.0)


class TestRadius:
    def test_values(self):
        assert separable_ball_radius(2) == 1
        assert separable_ball_radius(3) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert separable_ball_radius(4) == 0.5

    def test_monotone(self):
        for m in range(2, 40):
            assert separable_ball_radius(m + 1) == pytest.approx(separable_ball_radius(m) / math.sqrt(2), rel=1e-15)

    def test_rejects_single_party(self):
        with pytest.raises(ValueError):
            separable_ball_radius(1)


class TestUnnormalized:
    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2)])
    def test_identity(self, dims):
        n = int(np.prod(dims))
        r = certify_unnormalized(np.eye(n), dims)
        assert r.verdict is Verdict.CERTIFIED_SEPARABLE
        assert r.margin == r.radius_used

    def test_boundary_m2(self, rng):
        delta = random_hermitian_direction(4, rng)
        r = certify_unnormalized(np.eye(4) + delta, (2, 2))
        assert r.verdict is Verdict.CERTIFIED_SEPARABLE
        assert abs(r.margin) < 1e-12

    def test_outside_m3(self, rng):
        delta = random_hermitian_direction(8, rng) * 0.8
        r = certify_unnormalized(np.eye(8) + delta, (2, 2, 2))
        assert r.verdict is Verdict.INCONCLUSIVE
        assert r.margin == pytest.approx(1 / math.sqrt(2) - 0.8)

    def test_not_psd(self):
        r = certify_unnormalized(np.diag([1, 1, 1, -2.0]), (2, 2))
        assert r.verdict is Verdict.NOT_PSD

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            certify_unnormalized(np.eye(4), (2, 3))


class TestNormalized:
    def test_maximally_mixed(self):
        assert certify_normalized(np.eye(8) / 8, (2, 2, 2)).certified

    def test_radii(self):
        r = normalized_radii((2, 2))
        assert r["loose"] == 0.25
        assert r["tight"] == pytest.approx(1 / math.sqrt(12), abs=1e-15)
        r3 = normalized_radii((2, 2, 2))
        a = 2 ** -0.5
        assert r3["tight"] == pytest.approx(a / math.sqrt(8 * (8 - a * a)), rel=1e-15)
        assert r3["tight"] > r3["loose"]

    def test_werner_boundary(self):
        # distance p*sqrt(3)/2 equals radius 1/sqrt(12) at p = 1/3
        r = certify_normalized(werner(1 / 3), (2, 2), tight=True)
        assert r.certified
        assert abs(r.margin) < 1e-15
        assert r.distance == pytest.approx(math.sqrt(3) / 6, abs=1e-15)

    def test_werner_outside(self):
        r = certify_normalized(werner(0.34), (2, 2), tight=True)
        assert r.verdict is Verdict.INCONCLUSIVE
        assert not all(ppt_check(werner(0.34), (2, 2)).values())

    def test_loose_is_weaker(self):
        assert not certify_normalized(werner(0.3), (2, 2), tight=False).certified
        assert certify_normalized(werner(0.28), (2, 2), tight=False).certified

    def test_requires_unit_trace(self):
        with pytest.raises(TraceError):
            certify_normalized(np.eye(4) / 2, (2, 2))


class TestRlin:
    def test_real_product(self, rng):
        a, b = rand_real_sym(2, rng), rand_real_sym(3, rng)
        assert in_rlin(tensor(a, b), (2, 3))

    def test_identity(self):
        assert in_rlin(np.eye(8), (2, 2, 2))
        assert in_rlin(np.eye(6), (3, 2))

    def test_sigma_y_squared(self):
        yy = tensor(SY, SY)
        assert np.allclose(yy.imag, 0) and np.allclose(yy, yy.T)
        # block (0, 1) is -i*sigma_y = [[0, -1], [1, 0]], block (1, 0) its negative
        assert not in_rlin(yy, (2, 2))

    def test_real_combinations(self, rng):
        for dims in [(2, 2), (3, 2), (2, 2, 2)]:
            n = int(np.prod(dims))
            x = np.zeros((n, n))
            for _ in range(4):
                term = np.ones((1, 1))
                for d in dims:
                    term = np.kron(term, rand_real_sym(d, rng))
                x += rng.standard_normal() * term
            assert in_rlin(x, dims)

    def test_imaginary_factor_pair_fails(self, rng):
        for dims in [(2, 2), (3, 3)]:
            s1 = rng.standard_normal((dims[0], dims[0]))
            s2 = rng.standard_normal((dims[1], dims[1]))
            s1, s2 = s1 - s1.T, s2 - s2.T
            base = np.kron(rand_real_sym(dims[0], rng), rand_real_sym(dims[1], rng))
            assert in_rlin(base, dims)
            # (i S1) (x) (i S2) is Hermitian and real, but its blocks are antisymmetric in (i, j)
            assert not in_rlin(base + tensor(1j * s1, 1j * s2), dims)


class TestRealSeparable:
    def test_identity(self):
        assert certify_real_separable(np.eye(4), (2, 2)).verdict is Verdict.CERTIFIED_REAL_SEPARABLE

    def test_boundary(self, rng):
        delta = np.kron(rand_real_sym(2, rng), rand_real_sym(2, rng))
        delta /= np.linalg.norm(delta)
        r = certify_real_separable(np.eye(4) + delta, (2, 2))
        assert r.verdict is Verdict.CERTIFIED_REAL_SEPARABLE
        assert is_psd(np.eye(4) + delta)

    def test_sigma_y_rejected(self):
        rho = np.eye(4) + 0.5 * tensor(SY, SY)
        assert np.linalg.norm(rho - np.eye(4)) == pytest.approx(1)
        r = certify_real_separable(rho, (2, 2))
        assert r.verdict is Verdict.INCONCLUSIVE

    def test_outside_ball(self):
        r = certify_real_separable(np.diag([1, 1, 1, 3.0]), (2, 2))
        assert r.verdict is Verdict.INCONCLUSIVE

    def test_certified_implies_psd(self, rng):
        for _ in range(200):
            delta = np.zeros((8, 8))
            for _ in range(3):
                term = np.ones((1, 1))
                for d in (2, 2, 2):
                    term = np.kron(term, rand_real_sym(d, rng))
                delta += term
            delta *= rng.uniform(0, 1.2) / np.linalg.norm(delta)
            r = certify_real_separable(np.eye(8) + delta, (2, 2, 2))
            if r.certified:
                assert is_psd(np.eye(8) + delta)


class TestScalingReport:
    def test_residuals_small(self, rng):
        for d in (4, 8, 16):
            for _ in range(20):
                rep = scaling_report(random_ginibre(d, rng, rank=int(rng.integers(1, d + 1))))
                assert max(abs(r) for r in rep.equivalence_residuals) <= 1e-9
                assert rep.mu ** 2 < d

    def test_uses_trace_normalization(self):
        rep = scaling_report(3 * np.eye(4))
        assert rep.purity == pytest.approx(0.25)
        assert rep.mu == pytest.approx(0, abs=1e-12)


class TestPseudopureThreshold:
    def test_loose(self):
        assert pseudopure_threshold(2, 2, PseudopureBound.THIS_PAPER_LOOSE) == 0.25

    def test_braunstein(self):
        assert pseudopure_threshold(2, 2, "Braunstein") == pytest.approx(1 / 9, rel=1e-15)

    def test_bipartition(self):
        assert pseudopure_threshold(2, 2, "Bipartition") == pytest.approx(1 / 3, rel=1e-15)

    def test_this_paper_meets_loose_radius(self):
        # at the threshold the pseudopure distance eps*sqrt((d-1)/d) equals a/d
        for m, D in [(2, 2), (3, 2), (2, 3), (4, 2)]:
            d = D**m
            eps = pseudopure_threshold(m, D)
            loose = normalized_radii((D,) * m)["loose"]
            assert eps * math.sqrt((d - 1) / d) == pytest.approx(loose, rel=1e-13)

    def test_upper_qubits_only(self):
        assert pseudopure_threshold(3, 2, "UpperBound") == pytest.approx(2 / 10)
        with pytest.raises(ValueError):
            pseudopure_threshold(3, 3, "UpperBound")

    def test_huge_m_no_overflow(self):
        assert pseudopure_threshold(5000, 2) == 0.0
        assert pseudopure_threshold(5000, 2, "Bipartition") == 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (2, 2, 2)]))
def test_certified_normalized_states_are_psd(seed, dims):
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    radius = normalized_radii(dims)["tight"]
    rho = random_ball_state(n, radius, rng, normalized=True)
    r = certify_normalized(rho, dims)
    assert r.certified and r.margin >= -1e-12
    assert is_psd(rho)
