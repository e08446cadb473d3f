"""Shared fixtures: small grids, analytic potentials and random boundary matrices."""

import numpy as np
import pytest
from scipy.stats import unitary_group

from scatter_lens.spectral import (
    diagonal_wells,
    dirichlet,
    neumann,
    robin_boundary,
    smooth_bump,
    square_well,
    uniform_kgrid,
    zero_potential,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_unitary(rng):
    """Factory for Haar-random unitary matrices from a fixed seed."""

    def make(n: int) -> np.ndarray:
        return unitary_group.rvs(n, random_state=rng)

    return make


@pytest.fixture
def small_kgrid():
    return uniform_kgrid(40.0, 64)


@pytest.fixture
def free_scalar():
    return zero_potential(1)


@pytest.fixture
def well():
    """Q = −30 on [0, 1]; two Dirichlet bound states."""
    return square_well(-30.0, 1.0)


@pytest.fixture
def bump2():
    """2×2 hermitian sin² bump on [0, 2]."""
    amplitude = np.array([[-3.0, 1.0 - 0.5j], [1.0 + 0.5j, 2.0]])
    return smooth_bump(amplitude, 2.0)


@pytest.fixture
def three_wells():
    return diagonal_wells([-6.0, -12.0, -3.0], [1.0, 0.8, 1.5])


@pytest.fixture
def dirichlet1():
    return dirichlet(1)


@pytest.fixture
def neumann1():
    return neumann(1)


@pytest.fixture
def attractive_robin():
    """f_x(0) = −2 f(0): one bound state at κ = 2 for Q = 0."""
    return robin_boundary(-2.0)
