"""Utility modules for the application."""

from .linalg import (
    composite_gauss_legendre,
    dagger,
    frobenius,
    hermitian_defect,
    hermitian_part,
    inverse_sqrt_hpd,
    nearest_unitary,
    null_projector,
    unitarity_defect,
)
from .logger import get_logger, setup_logging

__all__ = [
    "get_logger",
    "setup_logging",
    "dagger",
    "frobenius",
    "hermitian_part",
    "hermitian_defect",
    "unitarity_defect",
    "nearest_unitary",
    "inverse_sqrt_hpd",
    "null_projector",
    "composite_gauss_legendre",
]
