"""Direct scattering: Jost solutions, S(k), bound states and normalisation."""

from .bound_states import (
    BoundState,
    PoleProfile,
    VirtualLevelReport,
    check_no_virtual_levels,
    default_kappa_range,
    find_bound_states,
    normalization_matrices,
    simple_pole_profile,
)
from .integrator import (
    JostSolution,
    StandardSolutions,
    jost_functions,
    jost_functions_batch,
    jost_solution,
    standard_solutions,
)
from .jost import (
    EntireSolution,
    JostData,
    ScatteredWave,
    entire_solution,
    jost_data,
    jost_identity_residuals,
    m_matrices,
    scattered_wave,
    scattering_matrix,
    scattering_matrices,
    wronskian_drift,
)
from .scattering import ScatteringData, compute_scattering_data

__all__ = [
    "JostSolution",
    "StandardSolutions",
    "jost_solution",
    "jost_functions",
    "jost_functions_batch",
    "standard_solutions",
    "JostData",
    "jost_data",
    "m_matrices",
    "scattering_matrix",
    "scattering_matrices",
    "jost_identity_residuals",
    "EntireSolution",
    "entire_solution",
    "ScatteredWave",
    "scattered_wave",
    "wronskian_drift",
    "BoundState",
    "find_bound_states",
    "default_kappa_range",
    "normalization_matrices",
    "VirtualLevelReport",
    "check_no_virtual_levels",
    "PoleProfile",
    "simple_pole_profile",
    "ScatteringData",
    "compute_scattering_data",
]
