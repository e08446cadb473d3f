"""The ``inverse`` subcommand: scattering-data file → recovered Q and U files."""

import argparse
from typing import Any

from scatter_lens.exceptions import ScatterLensError
from scatter_lens.inverse.pipeline import ReconstructionResult, invert_full
from scatter_lens.io import read_scattering_data, write_boundary, write_potential
from scatter_lens.spectral.grids import uniform_xgrid
from scatter_lens.utils.logger import get_logger

from ..runconfig import RunConfig
from .common import add_grid_arguments, failure, output_path

logger = get_logger(__name__)

POTENTIAL_FILE = "potential.txt"
BOUNDARY_FILE = "boundary.txt"


def inversion_summary(result: ReconstructionResult, marchenko_tol: float) -> dict[str, Any]:
    """Residual summary of an inversion; warns when the Marchenko residual misses ``marchenko_tol``."""
    diag = result.diagnostics
    if diag.marchenko_max_residual > marchenko_tol:
        logger.warning(
            f"✗ Marchenko residual {diag.marchenko_max_residual:.2e} exceeds {marchenko_tol:.1e}"
        )
    return {
        "T": diag.T,
        "marchenko_max_residual": diag.marchenko_max_residual,
        "marchenko_min_rcond": diag.marchenko_min_rcond,
        "g_asymmetry": diag.g_asymmetry,
        "roughness": diag.roughness,
        "u_spread": diag.u_spread,
        "u_unitarity_defect": diag.u_unitarity_defect,
        "admissible": diag.admissibility.passed,
    }


def write_reconstruction(cfg: RunConfig, result: ReconstructionResult) -> list[str]:
    q_path = output_path(cfg, POTENTIAL_FILE)
    u_path = output_path(cfg, BOUNDARY_FILE)
    write_potential(q_path, result.xgrid, result.Q)
    write_boundary(u_path, result.U)
    logger.info(f"✓ recovered Q and U written to {q_path.parent}")
    return [str(q_path), str(u_path)]


def run_inverse(cfg: RunConfig) -> dict[str, Any]:
    """
    Recover Q on the x-grid and U from a scattering-data file.

    Returns:
        Result dictionary with the written paths and the residual summary
    """
    try:
        sd = read_scattering_data(cfg.data)
        result = invert_full(
            sd, uniform_xgrid(cfg.x_max, cfg.n_x), force=cfg.force, unitarity_tol=cfg.unitarity_tol
        )
    except ScatterLensError as exc:
        return failure(exc)

    return {
        "success": True,
        "exit_code": 0,
        "outputs": write_reconstruction(cfg, result),
        **inversion_summary(result, cfg.marchenko_tol),
    }


def register_inverse_command(subparsers, common: argparse.ArgumentParser) -> None:
    """Register ``inverse`` with the top-level parser."""
    parser = subparsers.add_parser(
        "inverse",
        parents=[common],
        help="recover the potential and boundary matrix from scattering data",
    )
    parser.add_argument("--data", type=str, required=True, help="scattering-data file")
    parser.add_argument("--out", type=str, required=True, help="output directory")
    parser.add_argument("--force", action="store_true", help="invert data that fails the admissibility screen")
    add_grid_arguments(parser, k=False)
    parser.set_defaults(handler=run_inverse)
