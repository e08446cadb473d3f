"""Jost solutions, M± and the scattering matrix at single k."""

from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import robin_s
from scatter_lens.direct import (
    entire_solution,
    jost_data,
    jost_functions,
    jost_identity_residuals,
    jost_solution,
    scattered_wave,
    scattering_matrix,
    standard_solutions,
    wronskian_drift,
)
from scatter_lens.exceptions import UnsupportedK
from scatter_lens.spectral import build_boundary, dirichlet, neumann, robin_boundary, square_well
from scatter_lens.utils.linalg import unitarity_defect

K_SAMPLES = (0.1, 0.5, 1.0, 3.0, 10.0, 40.0)


def well_jost(strength: float, width: float, k: complex) -> tuple[complex, complex]:
    """F(0,k), F_x(0,k) for Q = −strength on [0, width]."""
    q = np.sqrt(k * k + strength + 0j)
    e = np.exp(1j * k * width)
    f0 = e * (np.cos(q * width) - 1j * k / q * np.sin(q * width))
    fx0 = e * (q * np.sin(q * width) + 1j * k * np.cos(q * width))
    return f0, fx0


class TestJostFunctions:
    def test_free_is_exact(self, free_scalar):
        f0, fx0 = jost_functions(free_scalar, 3.0)
        assert_allclose(f0, np.eye(1))
        assert_allclose(fx0, 3j * np.eye(1))

    @pytest.mark.parametrize("k", [0.2, 2.0, 15.0, 1.0j, 0.5 + 0.7j])
    def test_square_well_closed_form(self, k):
        f0, fx0 = jost_functions(square_well(-10.0, 1.0), k)
        ref_f, ref_fx = well_jost(10.0, 1.0, k)
        assert_allclose(f0[0, 0], ref_f, rtol=1e-8)
        assert_allclose(fx0[0, 0], ref_fx, rtol=1e-8)

    def test_asymptotics_beyond_support(self, bump2):
        x = np.array([3.0, 5.0, 9.0])
        sol = jost_solution(bump2, 1.7, x)
        phase = np.exp(1.7j * x)[:, None, None] * np.eye(2)
        assert_allclose(sol.F[1:], phase, atol=1e-12)
        assert_allclose(sol.Fx[1:], 1.7j * phase, atol=1e-12)

    def test_lower_half_plane_rejected(self, free_scalar):
        with pytest.raises(UnsupportedK):
            jost_functions(free_scalar, 1.0 - 0.5j)

    def test_standard_solution_initial_values(self, bump2):
        std = standard_solutions(bump2, 2.0, [0.0, 1.0])
        assert_allclose(std.Theta[0], np.eye(2), atol=1e-14)
        assert_allclose(std.Theta_x[0], 0.0, atol=1e-14)
        assert_allclose(std.Phi[0], 0.0, atol=1e-14)
        assert_allclose(std.Phi_x[0], np.eye(2), atol=1e-14)


class TestScatteringMatrix:
    def test_free_dirichlet_and_neumann(self, free_scalar):
        for k in K_SAMPLES:
            assert_allclose(scattering_matrix(jost_data(free_scalar, dirichlet(), k)), -np.eye(1), atol=1e-12)
            assert_allclose(scattering_matrix(jost_data(free_scalar, neumann(), k)), np.eye(1), atol=1e-12)

    @pytest.mark.parametrize("h", [-2.0, 0.5, 3.0])
    def test_free_robin(self, free_scalar, h):
        bc = robin_boundary(h)
        for k in K_SAMPLES:
            s = scattering_matrix(jost_data(free_scalar, bc, k))
            assert abs(s[0, 0] - robin_s(k, h)) <= 1e-8

    def test_free_dirichlet_m_minus(self, free_scalar):
        jd = jost_data(free_scalar, dirichlet(), 2.5)
        assert_allclose(jd.M_minus, np.eye(1) / (2.0 * 2.5), rtol=1e-12)

    def test_unitarity_for_random_boundaries(self, bump2, random_unitary):
        boundaries = [build_boundary(random_unitary(2)) for _ in range(20)]
        for k in K_SAMPLES:
            base = jost_data(bump2, boundaries[0], k)
            for bc in boundaries:
                s = scattering_matrix(replace(base, M_plus=None, M_minus=None), bc)
                assert float(unitarity_defect(s)) <= 1e-6

    def test_reflection_symmetry(self, bump2, random_unitary):
        bc = build_boundary(random_unitary(2))
        plus = jost_data(bump2, bc, 1.3)
        minus = jost_data(bump2, bc, -1.3)
        assert_allclose(plus.M_plus, minus.M_minus, atol=1e-14)
        assert_allclose(scattering_matrix(minus), np.linalg.inv(scattering_matrix(plus)), atol=1e-10)

    def test_off_axis_has_no_m_plus(self, bump2):
        jd = jost_data(bump2, dirichlet(2), 0.4 + 1.0j)
        assert jd.M_plus is None
        assert jd.M_minus.shape == (2, 2)


class TestIdentities:
    @pytest.mark.parametrize("k", [0.3, 2.0, 12.0])
    def test_jost_identities(self, bump2, k):
        residuals = jost_identity_residuals(jost_data(bump2, dirichlet(2), k))
        assert max(residuals) <= 1e-6

    def test_entire_solution_representations_agree(self, bump2, random_unitary):
        bc = build_boundary(random_unitary(2))
        xi = entire_solution(bump2, bc, 2.3, np.linspace(0.0, 4.0, 9))
        assert xi.mismatch <= 1e-6

    def test_scattered_wave(self, bump2, random_unitary):
        bc = build_boundary(random_unitary(2))
        wave = scattered_wave(bump2, bc, 1.1, np.linspace(0.0, 3.0, 7))
        assert wave.boundary_residual <= 1e-8
        assert wave.representation_mismatch <= 1e-6
        assert_allclose(wave.S, scattering_matrix(jost_data(bump2, bc, 1.1)), atol=1e-12)

    def test_wronskian_is_constant(self, bump2, random_unitary):
        bc = build_boundary(random_unitary(2))
        assert wronskian_drift(bump2, bc, 0.8, np.linspace(0.2, 5.0, 13)) <= 1e-6
