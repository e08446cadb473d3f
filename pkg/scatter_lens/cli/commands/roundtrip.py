"""The ``roundtrip`` subcommand: direct then inverse, compared against the input."""

import argparse
from typing import Any

import numpy as np

from scatter_lens.direct.scattering import compute_scattering_data
from scatter_lens.exceptions import ScatterLensError, ToleranceExceeded
from scatter_lens.inverse.pipeline import invert_full
from scatter_lens.io import write_potential_comparison, write_report, write_scattering_data
from scatter_lens.spectral.grids import uniform_kgrid, uniform_xgrid
from scatter_lens.utils.linalg import frobenius
from scatter_lens.utils.logger import get_logger

from ..runconfig import RunConfig
from .common import add_grid_arguments, failure, load_problem, output_path, relative_l2_error
from .direct import DATA_FILE
from .inverse import inversion_summary, write_reconstruction

logger = get_logger(__name__)

REPORT_FILE = "report.csv"
COMPARISON_FILE = "comparison.csv"


def run_roundtrip(cfg: RunConfig) -> dict[str, Any]:
    """
    Run direct and inverse on one problem and measure the reconstruction error.

    The report and the comparison CSV are written in both outcomes; the
    command fails with ToleranceExceeded when the Q error or the U error
    misses its tolerance.
    """
    try:
        p, bc = load_problem(cfg)
        sd = compute_scattering_data(
            p, bc, uniform_kgrid(cfg.k_max, cfg.n_k), unitarity_tol=cfg.unitarity_tol
        )
        xgrid = uniform_xgrid(cfg.x_max, cfg.n_x)
        result = invert_full(sd, xgrid, force=cfg.force, unitarity_tol=cfg.unitarity_tol)
    except ScatterLensError as exc:
        return failure(exc)

    q_in = p.evaluate(xgrid)
    q_error = relative_l2_error(xgrid, q_in, result.Q)
    u_error = float(frobenius(result.U - bc.U))
    summary = {
        "q_relative_l2_error": q_error,
        "u_error": u_error,
        "bound_state_count": len(sd.bound_states),
        "max_unitarity_defect": float(np.max(sd.unitarity_defects())),
        "decay_gap": sd.decay_gap(),
        **inversion_summary(result, cfg.marchenko_tol),
    }

    write_scattering_data(output_path(cfg, DATA_FILE), sd)
    outputs = write_reconstruction(cfg, result)
    report = output_path(cfg, REPORT_FILE)
    write_report(report, summary)
    comparison = output_path(cfg, COMPARISON_FILE)
    write_potential_comparison(comparison, xgrid, q_in, result.Q)
    outputs += [str(report), str(comparison)]
    logger.info(f"Q error {q_error:.3e} (tol {cfg.q_error_tol:g}), U error {u_error:.3e} (tol {cfg.u_error_tol:g})")

    if q_error > cfg.q_error_tol or u_error > cfg.u_error_tol:
        exc = ToleranceExceeded(
            f"round trip missed its tolerances: Q error {q_error:.3e}, U error {u_error:.3e}"
        )
        return failure(exc, outputs=outputs, **summary)
    logger.info("✓ round trip within tolerances")
    return {"success": True, "exit_code": 0, "outputs": outputs, **summary}


def register_roundtrip_command(subparsers, common: argparse.ArgumentParser) -> None:
    """Register ``roundtrip`` with the top-level parser."""
    parser = subparsers.add_parser(
        "roundtrip",
        parents=[common],
        help="direct then inverse, with a comparison report",
    )
    parser.add_argument("--potential", type=str, required=True, help="potential file")
    parser.add_argument("--boundary", type=str, required=True, help="boundary-matrix file")
    parser.add_argument("--out", type=str, required=True, help="output directory")
    parser.add_argument("--force", action="store_true", help="invert data that fails the admissibility screen")
    add_grid_arguments(parser)
    parser.set_defaults(handler=run_roundtrip)
