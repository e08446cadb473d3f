"""The ``direct`` subcommand: (Q, U) files → scattering-data file."""

import argparse
from typing import Any

import numpy as np

from scatter_lens.direct.scattering import compute_scattering_data
from scatter_lens.exceptions import ScatterLensError
from scatter_lens.io import write_scattering_data
from scatter_lens.spectral.grids import uniform_kgrid
from scatter_lens.utils.logger import get_logger

from ..runconfig import RunConfig
from .common import add_grid_arguments, failure, load_problem, output_path

logger = get_logger(__name__)

DATA_FILE = "scattering.txt"


def run_direct(cfg: RunConfig) -> dict[str, Any]:
    """
    Compute S on the k-grid, Û and the normalised bound states.

    Returns:
        Result dictionary

    Example:
        {
            "success": True,
            "exit_code": 0,
            "output": "out/scattering.txt",
            "bound_state_count": 1,
            "kappas": [2.0],
            "max_unitarity_defect": 3.1e-14,
            "decay_gap": 0.05
        }
    """
    try:
        p, bc = load_problem(cfg)
        sd = compute_scattering_data(
            p, bc, uniform_kgrid(cfg.k_max, cfg.n_k), unitarity_tol=cfg.unitarity_tol
        )
    except ScatterLensError as exc:
        return failure(exc)

    path = output_path(cfg, DATA_FILE)
    write_scattering_data(path, sd)
    logger.info(f"✓ scattering data written to {path}")
    return {
        "success": True,
        "exit_code": 0,
        "output": str(path),
        "bound_state_count": len(sd.bound_states),
        "kappas": [bs.kappa for bs in sd.bound_states],
        "max_unitarity_defect": float(np.max(sd.unitarity_defects())),
        "decay_gap": sd.decay_gap(),
    }


def register_direct_command(subparsers, common: argparse.ArgumentParser) -> None:
    """Register ``direct`` with the top-level parser."""
    parser = subparsers.add_parser(
        "direct",
        parents=[common],
        help="compute scattering data from a potential and a boundary matrix",
    )
    parser.add_argument("--potential", type=str, required=True, help="potential file")
    parser.add_argument("--boundary", type=str, required=True, help="boundary-matrix file")
    parser.add_argument("--out", type=str, required=True, help="output directory")
    add_grid_arguments(parser, x=False)
    parser.set_defaults(handler=run_direct)
