"""Helpers shared by the subcommands: input loading, output paths and result dictionaries."""

import argparse
from pathlib import Path
from typing import Any

import numpy as np
from scipy.integrate import trapezoid

from scatter_lens.exceptions import ScatterLensError, ShapeMismatch, ValidationError
from scatter_lens.io import read_boundary_matrix, read_potential
from scatter_lens.spectral.boundary import BoundaryCondition, build_boundary
from scatter_lens.spectral.potential import PotentialSpec, validate_potential
from scatter_lens.utils.logger import get_logger

from ..runconfig import RunConfig

logger = get_logger(__name__)


def add_grid_arguments(parser: argparse.ArgumentParser, *, k: bool = True, x: bool = True) -> None:
    """The numeric flags; unset values fall back to the SCATTER_* run defaults."""
    if k:
        parser.add_argument("--kmax", dest="k_max", type=float, help="largest sampled wavenumber")
        parser.add_argument("--nk", dest="n_k", type=int, help="number of k-points")
    if x:
        parser.add_argument("--xmax", dest="x_max", type=float, help="end of the reconstruction grid")
        parser.add_argument("--nx", dest="n_x", type=int, help="number of x-points")


def load_problem(cfg: RunConfig) -> tuple[PotentialSpec, BoundaryCondition]:
    """
    Read and validate the potential and boundary files.

    Raises:
        ParseError: a file is malformed
        ValidationError: Q fails validation, U is not unitary, or the sizes differ
    """
    p = read_potential(cfg.potential)
    report = validate_potential(p)
    if not report.passed:
        raise ValidationError(f"{cfg.potential}: {'; '.join(report.messages)}")
    bc = build_boundary(read_boundary_matrix(cfg.boundary))
    if p.n != bc.n:
        raise ShapeMismatch(f"potential is {p.n}×{p.n} but U is {bc.n}×{bc.n}")
    logger.info(f"✓ loaded {p.n}×{p.n} problem from {cfg.potential} and {cfg.boundary}")
    return p, bc


def output_path(cfg: RunConfig, name: str) -> Path:
    """``name`` inside the --out directory, created on demand."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def relative_l2_error(xgrid: np.ndarray, q_ref: np.ndarray, q_rec: np.ndarray) -> float:
    """‖Q_rec − Q_ref‖ / ‖Q_ref‖ in L²(0, x_max) with Frobenius norms; absolute when Q_ref ≡ 0."""
    diff = np.sqrt(trapezoid(np.sum(np.abs(q_rec - q_ref) ** 2, axis=(1, 2)), xgrid))
    ref = np.sqrt(trapezoid(np.sum(np.abs(q_ref) ** 2, axis=(1, 2)), xgrid))
    return float(diff / ref) if ref > 0.0 else float(diff)


def failure(exc: ScatterLensError, **extra: Any) -> dict[str, Any]:
    """Result dictionary of a command that stopped on a library error."""
    logger.error(f"✗ {type(exc).__name__}: {exc}")
    return {
        "success": False,
        "error": str(exc),
        "error_type": type(exc).__name__,
        "exit_code": exc.exit_code,
        **extra,
    }
