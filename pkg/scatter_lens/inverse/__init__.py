"""Inverse scattering: G(t), the Marchenko equation and recovery of Q and U."""

from .kernel import (
    BoundaryTail,
    SampledKernel,
    boundary_generator,
    continuous_part,
    fit_tail,
    hermitian_asymmetry,
    kernel_G,
    raised_cosine_taper,
    sample_kernel,
    tail_basis,
)
from .marchenko import (
    MarchenkoKernel,
    MarchenkoRow,
    MarchenkoSolver,
    marchenko_solve,
    nystrom_interpolate,
    solve_marchenko_kernel,
)
from .pipeline import (
    AdmissibilityReport,
    InversionDiagnostics,
    ReconstructionResult,
    invert_full,
    screen_admissibility,
    truncation_length,
)
from .recovery import BoundaryRecovery, jost_from_kernel, recover_boundary, recover_potential
from .reflectionless import reflectionless_data, reflectionless_kernel, reflectionless_potential

__all__ = [
    "SampledKernel",
    "BoundaryTail",
    "boundary_generator",
    "hermitian_asymmetry",
    "kernel_G",
    "continuous_part",
    "fit_tail",
    "tail_basis",
    "raised_cosine_taper",
    "sample_kernel",
    "MarchenkoKernel",
    "MarchenkoRow",
    "MarchenkoSolver",
    "marchenko_solve",
    "nystrom_interpolate",
    "solve_marchenko_kernel",
    "recover_potential",
    "recover_boundary",
    "jost_from_kernel",
    "BoundaryRecovery",
    "AdmissibilityReport",
    "InversionDiagnostics",
    "ReconstructionResult",
    "screen_admissibility",
    "invert_full",
    "truncation_length",
    "reflectionless_data",
    "reflectionless_kernel",
    "reflectionless_potential",
]
