"""Potential and boundary recovery from the Marchenko kernel."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from scatter_lens.exceptions import GridTooCoarse, ValidationError
from scatter_lens.inverse import (
    recover_potential,
    reflectionless_data,
    reflectionless_kernel,
    reflectionless_potential,
    sample_kernel,
    solve_marchenko_kernel,
)
from scatter_lens.inverse.recovery import fourth_order_derivative, jost_from_kernel, probe_indices
from scatter_lens.spectral import uniform_kgrid, uniform_xgrid

KAPPA, GAMMA = 1.0, 2.0
Q_TOL = 1e-4


class TestDerivative:
    def test_exact_on_quartics(self):
        x = np.linspace(0.0, 2.0, 21)
        f = x**4 - 3 * x**3 + x
        assert_allclose(fourth_order_derivative(f, x[1] - x[0]), 4 * x**3 - 9 * x**2 + 1, atol=1e-10)

    def test_matrix_valued(self):
        x = np.linspace(0.0, 1.0, 41)
        f = np.sin(x)[:, None, None] * np.array([[1.0, 2j], [-2j, 3.0]])
        d = fourth_order_derivative(f, x[1] - x[0])
        assert_allclose(d[:, 0, 1], 2j * np.cos(x), atol=1e-6)


class TestRecoverPotential:
    def test_closed_form_diagonal(self):
        x = uniform_xgrid(3.0, 121)
        k_diag = np.array([reflectionless_kernel(KAPPA, GAMMA, [xi], [xi])[0, 0] for xi in x])
        q, roughness = recover_potential(x, k_diag)
        assert_allclose(q, reflectionless_potential(KAPPA, GAMMA, x), atol=Q_TOL)
        assert roughness < 1e-2

    def test_through_marchenko(self):
        sd = reflectionless_data(KAPPA, GAMMA, uniform_kgrid(10.0, 64))
        x = uniform_xgrid(3.0, 121)
        mk = solve_marchenko_kernel(sample_kernel(sd, 30.0), x, 15.0)
        q, _ = recover_potential(x, mk.K_diag)
        assert_allclose(q, reflectionless_potential(KAPPA, GAMMA, x), atol=Q_TOL)

    def test_rough_samples(self, rng):
        x = uniform_xgrid(1.0, 11)
        with pytest.raises(GridTooCoarse):
            recover_potential(x, rng.standard_normal((11, 1, 1)), roughness_limit=1e-6)

    def test_nonuniform_grid(self):
        x = np.array([0.0, 0.1, 0.3, 0.4, 0.5, 0.6])
        with pytest.raises(ValidationError):
            recover_potential(x, np.zeros((6, 1, 1)))


class TestBoundaryHelpers:
    def test_probe_indices(self):
        k = uniform_kgrid(40.0, 800).k_values
        idx = probe_indices(k, 5)
        assert idx.size == 5
        assert k[idx[0]] == pytest.approx(1.0, abs=0.05)
        assert k[idx[-1]] == pytest.approx(20.0, abs=0.05)

    def test_small_grid_probes(self):
        k = uniform_kgrid(0.5, 10).k_values
        idx = probe_indices(k, 5)
        assert np.all(idx < k.size)
        assert np.all(np.diff(idx) > 0)

    def test_jost_from_kernel_needs_derivative(self):
        sd = reflectionless_data(KAPPA, GAMMA, uniform_kgrid(10.0, 64))
        mk = solve_marchenko_kernel(sample_kernel(sd, 40.0), [0.0, 0.5], 20.0)
        f_p, fx_p, f_m, fx_m = jost_from_kernel(mk.rows[0], 2.0)
        # F(0,k) = 1 − γ/(D(κ − ik)) with D = 1 + γ/(2κ)
        d = 1.0 + GAMMA / (2.0 * KAPPA)
        assert_allclose(f_p[0, 0], 1.0 - GAMMA / (d * (KAPPA - 2j)), atol=1e-7)
        assert_allclose(f_m[0, 0], 1.0 - GAMMA / (d * (KAPPA + 2j)), atol=1e-7)
        with pytest.raises(ValidationError):
            jost_from_kernel(mk.rows[1], 2.0)
