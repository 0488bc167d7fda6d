import numpy as np
import pytest

from spreadopt.spectral import (
    SpectralCoeffs,
    basis_vector,
    coeffs_from_alpha,
    coupling_matrices,
    decompose,
    reconstruct,
)


def random_unit_modulus(n, rng):
    return np.exp(2j * np.pi * rng.random(n))


class TestBasisVector:
    def test_m_equals_n_gives_all_ones(self):
        assert np.allclose(basis_vector(4, 0.0, 4), np.ones(4), atol=1e-14)

    def test_half_rate_alternation(self):
        assert np.allclose(basis_vector(2, 0.0, 4), [1, -1, 1, -1], atol=1e-14)

    def test_direct_evaluation_with_offset(self):
        # exp(2*pi*j*3/4) = -j
        assert np.allclose(basis_vector(1, 0.25, 2), [1, -1j], atol=1e-14)

    def test_unit_modulus_and_norm(self):
        v = basis_vector(3, 1 / 14, 7)
        assert np.allclose(np.abs(v), 1.0, atol=1e-14)
        assert np.linalg.norm(v) ** 2 == pytest.approx(7, rel=1e-14)

    @pytest.mark.parametrize("m", [0, 5, -1])
    def test_index_out_of_range(self, m):
        with pytest.raises(ValueError):
            basis_vector(m, 0.0, 4)

    @pytest.mark.parametrize("n", range(2, 65))
    def test_orthogonality_exhaustive(self, n):
        for eta in (0.0, 1.0 / (2 * n)):
            w = np.array([basis_vector(m, eta, n) for m in range(1, n + 1)])
            gram = w.conj() @ w.T
            assert np.max(np.abs(gram - n * np.eye(n))) < 1e-9 * n


class TestDecompose:
    def test_single_basis_vector(self):
        alpha = decompose(basis_vector(1, 0.0, 4)).alpha
        assert np.allclose(alpha, [2, 0, 0, 0], atol=1e-13)

    def test_all_ones_is_last_basis_vector(self):
        alpha = decompose(np.ones(4)).alpha
        assert np.allclose(alpha, [0, 0, 0, 2], atol=1e-13)

    def test_round_trip_both_bases(self):
        rng = np.random.default_rng(1)
        for n in (2, 3, 8, 31):
            s = random_unit_modulus(n, rng)
            c = decompose(s)
            assert np.max(np.abs(reconstruct(c, "alpha") - s)) < 1e-12
            assert np.max(np.abs(reconstruct(c, "beta") - s)) < 1e-12

    def test_isometry(self):
        rng = np.random.default_rng(2)
        for n in (4, 16, 33):
            s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            c = decompose(s)
            ref = np.linalg.norm(s)
            assert np.linalg.norm(c.alpha) == pytest.approx(ref, rel=1e-10)
            assert np.linalg.norm(c.beta) == pytest.approx(ref, rel=1e-10)

    def test_unit_modulus_power(self):
        rng = np.random.default_rng(3)
        s = random_unit_modulus(11, rng)
        c = decompose(s)
        assert np.linalg.norm(c.alpha) ** 2 == pytest.approx(11, rel=1e-12)
        assert np.linalg.norm(c.beta) ** 2 == pytest.approx(11, rel=1e-12)

    def test_too_short(self):
        with pytest.raises(ValueError):
            decompose(np.array([1.0]))


class TestReconstruct:
    def test_single_coefficient(self):
        c = coeffs_from_alpha(np.array([2.0, 0, 0, 0]))
        assert np.allclose(reconstruct(c, "alpha"), basis_vector(1, 0.0, 4), atol=1e-13)

    def test_zero_coefficients(self):
        c = SpectralCoeffs(alpha=np.zeros(4), beta=np.zeros(4))
        assert np.allclose(reconstruct(c, "alpha"), 0.0)
        assert np.allclose(reconstruct(c, "beta"), 0.0)

    def test_unknown_basis(self):
        c = coeffs_from_alpha(np.ones(4))
        with pytest.raises(ValueError):
            reconstruct(c, "gamma")


class TestCouplingMatrices:
    def test_n2_explicit_value(self):
        phi = coupling_matrices(2).phi
        expected = np.array([[(1 + 1j) / 2, (1 - 1j) / 2], [(1 - 1j) / 2, (1 + 1j) / 2]])
        assert np.max(np.abs(phi - expected)) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 5, 16, 31, 64])
    def test_unitarity_and_inverse(self, n):
        pair = coupling_matrices(n)
        eye = np.eye(n)
        assert np.max(np.abs(pair.phi.conj().T @ pair.phi - eye)) < 1e-10
        assert np.max(np.abs(pair.phi_hat.conj().T @ pair.phi_hat - eye)) < 1e-10
        assert np.max(np.abs(pair.phi_hat - pair.phi.conj().T)) < 1e-10
        assert np.max(np.abs(pair.phi @ pair.phi_hat - eye)) < 1e-10

    @pytest.mark.parametrize("n", [2, 4, 7, 16, 31])
    def test_consistency_triangle(self, n):
        rng = np.random.default_rng(n)
        s = random_unit_modulus(n, rng)
        c = decompose(s)
        pair = coupling_matrices(n)
        assert np.max(np.abs(c.alpha - pair.phi @ c.beta)) < 1e-10
        assert np.max(np.abs(c.beta - pair.phi_hat @ c.alpha)) < 1e-10

    def test_cross_check_against_decompose_n16(self):
        rng = np.random.default_rng(16)
        alpha = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        alpha *= np.sqrt(16) / np.linalg.norm(alpha)
        s = reconstruct(coeffs_from_alpha(alpha), "alpha")
        c = decompose(s)
        expected_beta = coupling_matrices(16).phi_hat @ alpha
        assert np.max(np.abs(c.beta - expected_beta)) < 1e-10

    def test_too_small(self):
        with pytest.raises(ValueError):
            coupling_matrices(1)
