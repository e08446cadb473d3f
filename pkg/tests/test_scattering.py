"""Direct problem on a k-grid."""

import time

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import robin_s
from scatter_lens.direct import (
    ScatteringData,
    compute_scattering_data,
    jost_data,
    scattering_matrices,
    scattering_matrix,
)
from scatter_lens.exceptions import ShapeMismatch
from scatter_lens.spectral import (
    build_boundary,
    dirichlet,
    robin_boundary,
    smooth_bump,
    uniform_kgrid,
    zero_potential,
)
from scatter_lens.utils.linalg import frobenius, unitarity_defect

UNITARITY_TOL = 1e-8


class TestComputeScatteringData:
    def test_free_dirichlet(self, free_scalar, small_kgrid):
        sd = compute_scattering_data(free_scalar, dirichlet(), small_kgrid)
        assert_allclose(sd.S[:, 0, 0], -1.0, atol=1e-12)
        assert_allclose(sd.Uhat, -np.eye(1))
        assert sd.bound_states == []
        assert sd.decay_gap() < 1e-12

    def test_attractive_robin(self, free_scalar, attractive_robin, small_kgrid):
        sd = compute_scattering_data(free_scalar, attractive_robin, small_kgrid)
        assert_allclose(sd.S[:, 0, 0], robin_s(small_kgrid.k_values, -2.0), atol=1e-8)
        assert_allclose(sd.Uhat, np.eye(1))
        assert len(sd.bound_states) == 1
        (bs,) = sd.bound_states
        assert bs.kappa == pytest.approx(2.0, abs=1e-8)
        assert_allclose(bs.C @ bs.C, [[4.0]], rtol=1e-8)

    def test_matrix_bump_is_unitary(self, bump2, random_unitary, small_kgrid):
        sd = compute_scattering_data(bump2, build_boundary(random_unitary(2)), small_kgrid)
        assert sd.n == 2
        assert float(np.max(sd.unitarity_defects())) < UNITARITY_TOL
        for bs in sd.bound_states:
            assert bs.kappa > 0.0
            assert_allclose(bs.C, bs.C.conj().T, atol=1e-10)
            assert np.min(np.linalg.eigvalsh(bs.C)) > -1e-10

    def test_size_mismatch(self, small_kgrid):
        with pytest.raises(ShapeMismatch):
            compute_scattering_data(zero_potential(2), dirichlet(1), small_kgrid)


class TestScatteringDataShapes:
    def test_wrong_length(self, small_kgrid):
        with pytest.raises(ShapeMismatch):
            ScatteringData(kgrid=small_kgrid, S=np.ones((3, 1, 1)), Uhat=np.eye(1))

    def test_uhat_size(self, small_kgrid):
        with pytest.raises(ShapeMismatch):
            ScatteringData(kgrid=small_kgrid, S=np.ones((small_kgrid.size, 1, 1)), Uhat=np.eye(2))

    def test_real_input_is_promoted(self, small_kgrid):
        sd = ScatteringData(kgrid=small_kgrid, S=np.ones((small_kgrid.size, 1, 1)), Uhat=np.eye(1))
        assert sd.S.dtype == complex
        assert_allclose(sd.unitarity_defects(), 0.0)

    def test_decay_gap_reads_last_point(self, small_kgrid):
        s = np.ones((small_kgrid.size, 1, 1), dtype=complex)
        s[-1] = 0.5
        sd = ScatteringData(kgrid=small_kgrid, S=s, Uhat=np.eye(1), bound_states=[])
        assert sd.decay_gap() == pytest.approx(0.5)


def test_robin_repulsive_has_no_bound_state(free_scalar, small_kgrid):
    sd = compute_scattering_data(free_scalar, robin_boundary(0.5), small_kgrid)
    assert sd.bound_states == []
    assert_allclose(sd.S[:, 0, 0], robin_s(small_kgrid.k_values, 0.5), atol=1e-8)


class TestHighEnergy:
    @pytest.fixture
    def coupled(self, random_unitary):
        basis = random_unitary(2)
        return build_boundary(basis @ np.diag(np.exp(1j * np.array([np.pi, 0.6]))) @ basis.conj().T)

    def test_gap_decays_towards_uhat(self, coupled):
        p = smooth_bump([[-1.0, 0.5 - 0.2j], [0.5 + 0.2j, 0.8]], 1.0)
        kgrid = uniform_kgrid(50.0, 200)
        sd = compute_scattering_data(p, coupled, kgrid)
        k = kgrid.k_values
        gap = frobenius(sd.S - sd.Uhat)
        assert gap[-1] < 0.05
        upper = k >= 10.0
        slope = np.polyfit(np.log(k[upper]), np.log(gap[upper]), 1)[0]
        assert slope < -0.5
        assert gap[-1] < gap[np.argmin(np.abs(k - 10.0))]

    def test_unitary_at_every_k_for_random_boundaries(self, random_unitary):
        p = smooth_bump([[-2.0, 1.0 + 0.5j], [1.0 - 0.5j, 1.5]], 1.5)
        kgrid = uniform_kgrid(40.0, 200)
        start = time.perf_counter()
        for _ in range(20):
            bc = build_boundary(random_unitary(2))
            s = scattering_matrices(p, bc, kgrid.k_values)
            assert np.max(unitarity_defect(s)) <= 1e-6
        assert time.perf_counter() - start < 30.0

    def test_batched_matches_single_k(self, bump2, coupled):
        ks = np.array([0.3, 2.0, 17.5, 40.0])
        batched = scattering_matrices(bump2, coupled, ks)
        single = np.stack([scattering_matrix(jost_data(bump2, coupled, k)) for k in ks])
        assert_allclose(batched, single, atol=1e-8)
