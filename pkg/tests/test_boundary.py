"""Boundary algebra: A, B, Û, Robin slopes and the boundary residual."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from scatter_lens.exceptions import NonSquare, NonUnitary
from scatter_lens.spectral import (
    boundary_operator,
    boundary_residual,
    build_boundary,
    compute_uhat,
    dirichlet,
    neumann,
    robin_boundary,
    robin_parameters,
)
from scatter_lens.utils.linalg import dagger


class TestBuildBoundary:
    def test_identities_for_random_unitary(self, random_unitary):
        for n in (1, 2, 4):
            bc = build_boundary(random_unitary(n))
            assert bc.selfadjoint_defect() < 1e-12
            assert bc.completeness_defect() < 1e-12
            assert_allclose(bc.A, 0.5 * (bc.U + np.eye(n)), atol=1e-15)
            assert_allclose(bc.B, 0.5j * (bc.U - np.eye(n)), atol=1e-15)

    def test_dirichlet_and_neumann(self):
        assert_allclose(dirichlet(2).A, 0.0, atol=1e-14)
        assert_allclose(dirichlet(2).B, -1j * np.eye(2))
        assert_allclose(neumann(2).A, np.eye(2))
        assert_allclose(neumann(2).B, 0.0, atol=1e-14)

    def test_scalar_is_promoted(self):
        bc = build_boundary(1j)
        assert bc.n == 1
        assert bc.U.shape == (1, 1)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            build_boundary(np.ones((2, 3)))

    def test_non_unitary(self):
        with pytest.raises(NonUnitary):
            build_boundary(np.diag([1.0, 0.5]))

    def test_near_unitary_is_projected(self, random_unitary):
        u = random_unitary(3)
        bc = build_boundary(u * (1.0 + 1e-10))
        assert_allclose(dagger(bc.U) @ bc.U, np.eye(3), atol=1e-14)


class TestUhat:
    def test_dirichlet(self):
        assert_allclose(compute_uhat(dirichlet(3)), -np.eye(3), atol=1e-14)

    def test_neumann_and_robin(self):
        assert_allclose(compute_uhat(neumann(2)), np.eye(2), atol=1e-14)
        assert_allclose(compute_uhat(robin_boundary([0.5, -3.0])), np.eye(2), atol=1e-14)

    def test_mixed_keeps_eigenvectors(self, random_unitary):
        z = random_unitary(3)
        u = z @ np.diag([-1.0, 1j, np.exp(0.3j)]) @ dagger(z)
        uhat = compute_uhat(build_boundary(u))
        assert_allclose(uhat, z @ np.diag([-1.0, 1.0, 1.0]) @ dagger(z), atol=1e-12)
        assert_allclose(uhat @ uhat, np.eye(3), atol=1e-12)
        assert_allclose(uhat, dagger(uhat), atol=0.0)


def test_robin_parameters_round_trip():
    h = np.array([-2.0, 0.5, 3.0])
    assert_allclose(np.sort(robin_parameters(robin_boundary(h))), np.sort(h), rtol=1e-12)
    assert robin_parameters(dirichlet(2)).size == 0


class TestBoundaryResidual:
    def test_entire_solution_initial_values(self, random_unitary):
        bc = build_boundary(random_unitary(3))
        assert boundary_residual(bc.A, bc.B, bc) < 1e-14

    def test_robin_condition(self):
        bc = robin_boundary(1.5)
        f0 = np.array([[2.0]])
        assert boundary_residual(f0, 1.5 * f0, bc) < 1e-14
        assert boundary_residual(f0, -1.5 * f0, bc) > 1.0

    def test_vector_columns(self):
        bc = dirichlet(2)
        assert_allclose(boundary_operator(np.zeros(2), np.array([1.0, 2.0]), bc), 0.0)
