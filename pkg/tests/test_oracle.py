import math

import numpy as np
import pytest

from hgmrf.car import NoiseModel, SfcarParams, sfcar_from_snr
from hgmrf.oracle import (
    FREE_BOUNDARY_MAX_SIDE,
    LatticeSpec,
    MonteCarloSpec,
    finite_lattice_rates,
    sample_llr_per_node,
    torus_eigenvalues,
)
from hgmrf.rates import kli_integrand, sfcar_rates

STEIN_KLI = 0.5 * math.log(2.0) + 0.25 - 0.5
HALF_LOG2 = 0.5 * math.log(2.0)


def dense_free_reference(params: SfcarParams, sigma2: float, n: int):
    """Independent free-boundary oracle: explicit double-loop assembly of
    the precision matrix, then an eigendecomposition."""
    lam = params.lambda_
    q = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            row = i * n + j
            q[row, row] = params.kappa
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                ii, jj = i + di, j + dj
                if 0 <= ii < n and 0 <= jj < n:
                    q[row, ii * n + jj] = -lam
    eigvals = np.linalg.eigvalsh(q)
    s = 1.0 / (eigvals * sigma2)
    kli = float(np.mean(kli_integrand(s)))
    mi = float(np.mean(0.5 * np.log1p(s)))
    return kli, mi


class TestTorusEigenvalues:
    def test_iid_is_identity(self):
        q = torus_eigenvalues(SfcarParams(kappa=1.0, zeta=0.0), 5)
        np.testing.assert_allclose(q, np.ones((5, 5)), rtol=0, atol=0)

    def test_two_by_two_values(self):
        q = torus_eigenvalues(SfcarParams(kappa=1.0, zeta=0.2), 2)
        assert sorted(q.ravel()) == pytest.approx([0.2, 1.0, 1.0, 1.8], abs=1e-14)

    def test_minimum_at_origin(self):
        q = torus_eigenvalues(SfcarParams(kappa=1.0, zeta=0.24), 4)
        assert q.min() == pytest.approx(1.0 - 4 * 0.24, abs=1e-14)
        assert q.min() == q[0, 0]

    def test_positive_for_valid_zeta(self):
        q = torus_eigenvalues(SfcarParams(kappa=0.5, zeta=0.2499999), 64)
        assert np.all(q > 0)

    def test_small_lattice_rejected(self):
        with pytest.raises(ValueError):
            torus_eigenvalues(SfcarParams(kappa=1.0, zeta=0.1), 1)


class TestFiniteLatticeRates:
    def test_iid_boundary_independent(self):
        noise = NoiseModel(1.0)
        params = sfcar_from_snr(1.0, 0.0, noise)
        for lattice in (LatticeSpec(16), LatticeSpec(8, "free")):
            res = finite_lattice_rates(params, noise, lattice)
            assert res.kli_rate == pytest.approx(STEIN_KLI, abs=1e-11)
            assert res.mi_rate == pytest.approx(HALF_LOG2, abs=1e-11)

    def test_torus_matches_spectral_integral(self):
        noise = NoiseModel(1.0)
        params = sfcar_from_snr(10.0, 0.1, noise)
        res = finite_lattice_rates(params, noise, LatticeSpec(1024))
        ref = sfcar_rates(0.1, 10.0)
        assert res.kli_rate == pytest.approx(ref.kli_rate, abs=1e-6)
        assert res.mi_rate == pytest.approx(ref.mi_rate, abs=1e-6)

    def test_free_boundary_matches_dense_reference(self):
        params = SfcarParams(kappa=1.0, zeta=0.2)
        noise = NoiseModel(1.0)
        res = finite_lattice_rates(params, noise, LatticeSpec(8, "free"))
        ref_kli, ref_mi = dense_free_reference(params, 1.0, 8)
        assert res.kli_rate == pytest.approx(ref_kli, abs=1e-10)
        assert res.mi_rate == pytest.approx(ref_mi, abs=1e-10)

    def test_torus_sum_converges_to_integral(self):
        noise = NoiseModel(1.0)
        for zeta in (0.1, 0.2):
            params = sfcar_from_snr(10.0, zeta, noise)
            ref = sfcar_rates(zeta, 10.0)
            diffs = []
            for n in (16, 32, 64, 128, 256):
                res = finite_lattice_rates(params, noise, LatticeSpec(n))
                diffs.append(abs(res.mi_rate - ref.mi_rate))
            # geometric until the roundoff floor, then stays at the floor
            floor = 1e-13 * ref.mi_rate
            for a, b in zip(diffs, diffs[1:]):
                assert b < a or max(a, b) <= floor

    def test_free_and_torus_boundary_agree_at_scale(self):
        noise = NoiseModel(1.0)
        params = sfcar_from_snr(10.0, 0.1, noise)
        free = finite_lattice_rates(params, noise, LatticeSpec(64, "free"))
        torus = finite_lattice_rates(params, noise, LatticeSpec(64))
        assert abs(free.mi_rate - torus.mi_rate) <= 5e-2

    def test_lattice_validation(self):
        with pytest.raises(ValueError):
            LatticeSpec(1)
        with pytest.raises(ValueError):
            LatticeSpec(8, "periodic")
        with pytest.raises(ValueError):
            LatticeSpec(FREE_BOUNDARY_MAX_SIDE + 1, "free")


class TestMonteCarloLlr:
    def test_same_seed_bit_identical(self):
        params = sfcar_from_snr(10.0, 0.1)
        noise = NoiseModel(1.0)
        spec = MonteCarloSpec(replicates=50, seed=987654321)
        first = sample_llr_per_node(params, noise, 16, spec)
        second = sample_llr_per_node(params, noise, 16, spec)
        assert first == second

    def test_different_seeds_differ(self):
        params = sfcar_from_snr(10.0, 0.1)
        noise = NoiseModel(1.0)
        a = sample_llr_per_node(params, noise, 16, MonteCarloSpec(50, 1))
        b = sample_llr_per_node(params, noise, 16, MonteCarloSpec(50, 2))
        assert a != b

    def test_mean_consistent_with_exact_value(self):
        noise = NoiseModel(1.0)
        params = sfcar_from_snr(10.0, 0.1, noise)
        exact = finite_lattice_rates(params, noise, LatticeSpec(32)).kli_rate
        mean, stderr = sample_llr_per_node(params, noise, 32, MonteCarloSpec(400, 0))
        assert abs(mean - exact) <= 4.0 * stderr

    def test_consistency_across_seed_family(self):
        noise = NoiseModel(1.0)
        params = sfcar_from_snr(10.0, 0.1, noise)
        exact = finite_lattice_rates(params, noise, LatticeSpec(32)).kli_rate
        hits = 0
        for seed in range(100):
            mean, stderr = sample_llr_per_node(params, noise, 32, MonteCarloSpec(200, seed))
            if abs(mean - exact) <= 4.0 * stderr:
                hits += 1
        assert hits >= 99

    def test_parseval_noise_power(self):
        # DFT-domain replicate power must average sigma^2 per bin
        from hgmrf.oracle import _replicate_normals

        sigma2 = 2.0
        total = 0.0
        reps, n = 100, 32
        for r in range(reps):
            y = math.sqrt(sigma2) * _replicate_normals(314159, r, n)
            total += float(np.mean(np.abs(np.fft.fft2(y, norm="ortho")) ** 2))
        assert total / reps == pytest.approx(sigma2, rel=0.01)

    def test_stderr_needs_replicates(self):
        params = sfcar_from_snr(1.0, 0.0)
        with pytest.raises(ValueError):
            sample_llr_per_node(params, NoiseModel(1.0), 8, MonteCarloSpec(1, 0))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            MonteCarloSpec(0, 1)
        with pytest.raises(ValueError):
            MonteCarloSpec(10, -1)
        with pytest.raises(ValueError):
            MonteCarloSpec(10, 2**64)
