"""Star-graph (diagonal potential) reduction to scalar problems."""

from .star_graph import (
    EdgeReconstruction,
    StarBoundState,
    StarReconstruction,
    StarScatteringData,
    assemble_diagonal,
    extract_star_data,
    invert_star,
    scalar_marchenko_invert,
)

__all__ = [
    "StarScatteringData",
    "StarBoundState",
    "EdgeReconstruction",
    "StarReconstruction",
    "extract_star_data",
    "scalar_marchenko_invert",
    "assemble_diagonal",
    "invert_star",
]
