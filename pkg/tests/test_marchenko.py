"""Nyström solution of the Marchenko equation against the reflectionless kernel."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from scatter_lens.exceptions import IllConditioned, ValidationError
from scatter_lens.inverse import (
    MarchenkoSolver,
    marchenko_solve,
    reflectionless_data,
    reflectionless_kernel,
    sample_kernel,
    solve_marchenko_kernel,
)
from scatter_lens.spectral import uniform_kgrid

KAPPA, GAMMA, T = 1.0, 2.0, 15.0
KERNEL_TOL = 1e-8


@pytest.fixture(scope="module")
def G():
    sd = reflectionless_data(KAPPA, GAMMA, uniform_kgrid(10.0, 64))
    return sample_kernel(sd, 2.0 * T)


def exact(x, y):
    return reflectionless_kernel(KAPPA, GAMMA, x, y)


class TestRow:
    @pytest.mark.parametrize("x", [0.0, 0.37, 1.0, 4.2])
    def test_diagonal(self, G, x):
        row = marchenko_solve(G, x, T)
        assert_allclose(row.K_diag, exact([x], [x])[0, 0], atol=KERNEL_TOL)
        assert row.residual < 1e-10
        assert 0.0 < row.rcond <= 1.0

    def test_nodes(self, G):
        row = marchenko_solve(G, 0.37, T)
        assert row.nodes[0] >= 0.37
        assert row.nodes[-1] <= T
        assert_allclose(row.weights.sum(), T - 0.37, rtol=1e-12)
        assert_allclose(row.K, exact([0.37], row.nodes)[0], atol=KERNEL_TOL)

    def test_derivative_at_origin(self, G):
        row = MarchenkoSolver(G, T).solve(0.0, with_derivative=True)
        k = exact([0.0], row.nodes)[0]
        d = 1.0 + GAMMA / (2.0 * KAPPA)
        expected = k * (-KAPPA + GAMMA / d)
        assert_allclose(row.K_x, expected, atol=1e-7)


class TestKernel:
    def test_rows_and_interpolant(self, G):
        xgrid = np.linspace(0.0, 3.0, 7)
        mk = solve_marchenko_kernel(G, xgrid, T)
        assert len(mk.rows) == xgrid.size
        assert mk.rows[0].K_x is not None
        assert all(r.K_x is None for r in mk.rows[1:])
        diag = np.array([exact([x], [x])[0, 0] for x in xgrid])
        assert_allclose(mk.K_diag, diag, atol=KERNEL_TOL)
        y = np.linspace(1.0, 6.0, 11)
        assert_allclose(mk.evaluate(2, y), exact([xgrid[2]], y)[0], atol=KERNEL_TOL)
        assert mk.max_residual < 1e-10


class TestFailures:
    def test_ill_conditioned(self, G):
        with pytest.raises(IllConditioned):
            MarchenkoSolver(G, T, condition_limit=1.0).solve(0.5)

    def test_truncation_beyond_table(self, G):
        with pytest.raises(ValidationError):
            MarchenkoSolver(G, G.t_max)

    @pytest.mark.parametrize("x", [-0.1, T])
    def test_x_outside(self, G, x):
        with pytest.raises(ValidationError):
            MarchenkoSolver(G, T).solve(x)
