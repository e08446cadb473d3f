"""Boundary-condition algebra, potentials and grids shared by all solvers."""

from .boundary import (
    BoundaryCondition,
    boundary_operator,
    boundary_residual,
    build_boundary,
    compute_uhat,
    dirichlet,
    neumann,
    robin_boundary,
    robin_parameters,
)
from .grids import KGrid, uniform_kgrid, uniform_xgrid
from .potential import (
    PotentialReport,
    PotentialSpec,
    diagonal_wells,
    reflectionless,
    sampled_potential,
    smooth_bump,
    square_well,
    validate_potential,
    zero_potential,
)

__all__ = [
    "BoundaryCondition",
    "build_boundary",
    "compute_uhat",
    "boundary_operator",
    "boundary_residual",
    "dirichlet",
    "neumann",
    "robin_boundary",
    "robin_parameters",
    "KGrid",
    "uniform_kgrid",
    "uniform_xgrid",
    "PotentialSpec",
    "PotentialReport",
    "zero_potential",
    "square_well",
    "diagonal_wells",
    "smooth_bump",
    "reflectionless",
    "sampled_potential",
    "validate_potential",
]
