"""Text file formats for potentials, boundary matrices, scattering data and reports."""

from .formats import (
    read_boundary_matrix,
    read_potential,
    read_potential_samples,
    read_report,
    read_scattering_data,
    write_boundary,
    write_potential,
    write_potential_comparison,
    write_report,
    write_scattering_data,
)

__all__ = [
    "read_potential",
    "read_potential_samples",
    "write_potential",
    "read_boundary_matrix",
    "write_boundary",
    "read_scattering_data",
    "write_scattering_data",
    "read_report",
    "write_report",
    "write_potential_comparison",
]
