"""Star graphs: diagonal data split into independent scalar edges."""

from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import robin_s
from scatter_lens.direct import BoundState, ScatteringData, compute_scattering_data
from scatter_lens.exceptions import GridMismatch, NotDiagonal
from scatter_lens.inverse import invert_full
from scatter_lens.spectral import dirichlet, uniform_kgrid, uniform_xgrid
from scatter_lens.star import EdgeReconstruction, assemble_diagonal, extract_star_data, invert_star


def two_edge_data(k_max: float = 200.0, n_k: int = 2000) -> ScatteringData:
    """Free edges: edge 0 with f_x(0) = −2f(0) (κ = 2), edge 1 Dirichlet."""
    kgrid = uniform_kgrid(k_max, n_k)
    S = np.zeros((kgrid.size, 2, 2), dtype=complex)
    S[:, 0, 0] = robin_s(kgrid.k_values, -2.0)
    S[:, 1, 1] = -1.0
    c = np.diag([2.0, 0.0]).astype(complex)
    state = BoundState(kappa=2.0, P=np.diag([1.0, 0.0]), multiplicity=1, C=c)
    return ScatteringData(kgrid=kgrid, S=S, Uhat=np.diag([1.0, -1.0]).astype(complex), bound_states=[state])


def edge(i: int, xgrid) -> EdgeReconstruction:
    return EdgeReconstruction(
        edge=i, xgrid=xgrid, q=np.zeros(xgrid.size), u=-1.0 + 0j, imaginary_residue=0.0, marchenko_residual=0.0
    )


class TestExtraction:
    def test_edges(self):
        star = extract_star_data(two_edge_data(10.0, 32))
        assert star.n == 2
        assert star.R.shape == (2, 32)
        assert_allclose(star.uhat, [1.0, -1.0])
        assert_allclose(star.bound_states[0].gamma, [4.0, 0.0])

        first, second = star.edge(0), star.edge(1)
        assert len(first.bound_states) == 1
        assert_allclose(first.bound_states[0].C @ first.bound_states[0].C, [[4.0]])
        assert second.bound_states == []
        assert_allclose(second.S[:, 0, 0], -1.0)
        assert_allclose(second.Uhat, [[-1.0]])

    def test_coupled_s(self):
        sd = two_edge_data(10.0, 32)
        S = sd.S.copy()
        S[:, 0, 1] = S[:, 1, 0] = 0.1
        with pytest.raises(NotDiagonal):
            extract_star_data(ScatteringData(kgrid=sd.kgrid, S=S, Uhat=sd.Uhat))

    def test_coupled_uhat(self):
        sd = two_edge_data(10.0, 32)
        swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        with pytest.raises(NotDiagonal):
            extract_star_data(ScatteringData(kgrid=sd.kgrid, S=sd.S, Uhat=swap))

    def test_non_diagonal_potential(self, bump2):
        sd = compute_scattering_data(bump2, dirichlet(2), uniform_kgrid(10.0, 16))
        with pytest.raises(NotDiagonal):
            extract_star_data(sd)


class TestAssembly:
    def test_diagonal(self):
        x = uniform_xgrid(1.0, 11)
        e0 = edge(0, x)
        e1 = replace(edge(1, x), q=np.linspace(-1.0, 0.0, 11))
        p = assemble_diagonal([e0, e1])
        assert p.n == 2
        assert_allclose(p.values[:, 1, 1], np.linspace(-1.0, 0.0, 11))
        assert_allclose(p.values[:, 0, 1], 0.0)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            assemble_diagonal([edge(0, uniform_xgrid(1.0, 11)), edge(1, uniform_xgrid(1.0, 21))])

    def test_empty(self):
        with pytest.raises(GridMismatch):
            assemble_diagonal([])

    @pytest.mark.parametrize("h", [-2.0, 0.5, 3.0])
    def test_robin_slope(self, h):
        e = replace(edge(0, uniform_xgrid(1.0, 11)), u=complex((1 - 1j * h) / (1 + 1j * h)))
        assert e.robin_slope == pytest.approx(h)

    def test_dirichlet_slope(self):
        assert edge(0, uniform_xgrid(1.0, 11)).robin_slope == float("inf")


class TestInvertStar:
    def test_free_edges(self):
        star = invert_star(two_edge_data(), uniform_xgrid(3.0, 61))
        assert np.max(np.abs(star.potential.values)) < 1e-2
        assert_allclose(np.diag(star.U), [(1 + 2j) / (1 - 2j), -1.0], atol=1e-2)
        assert star.edges[0].robin_slope == pytest.approx(-2.0, abs=0.05)
        assert star.edges[1].robin_slope == float("inf")

    @pytest.mark.slow
    def test_matches_matrix_inversion(self, three_wells):
        sd = compute_scattering_data(three_wells, dirichlet(3), uniform_kgrid(40.0, 400))
        x = uniform_xgrid(3.0, 121)
        star = invert_star(sd, x)
        matrix = invert_full(sd, x)
        assert_allclose(star.potential.values, np.real(matrix.Q), atol=1e-6)
        assert_allclose(star.U, matrix.U, atol=1e-6)
        off = np.concatenate([row.K[:, ~np.eye(3, dtype=bool)] for row in matrix.kernel.rows])
        assert np.max(np.abs(off)) <= 1e-8
        assert all(e.imaginary_residue < 1e-8 for e in star.edges)
