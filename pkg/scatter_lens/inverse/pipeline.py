"""Inverse problem orchestration: scattering data → (Q, U)."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel

from scatter_lens.config import inverse_config, run_defaults
from scatter_lens.direct.scattering import ScatteringData
from scatter_lens.exceptions import InadmissibleData, ValidationError
from scatter_lens.spectral.potential import PotentialSpec, sampled_potential
from scatter_lens.utils.linalg import frobenius, hermitian_defect, hermitian_part
from scatter_lens.utils.logger import get_logger

from .kernel import sample_kernel
from .marchenko import MarchenkoKernel, solve_marchenko_kernel
from .recovery import BoundaryRecovery, recover_boundary, recover_potential

logger = get_logger(__name__)


class AdmissibilityReport(BaseModel):
    """Screen of the data hypotheses: unitary S, hermitian Û² = I, κ > 0, C ≥ 0."""

    max_unitarity_defect: float
    uhat_defect: float
    min_kappa: Optional[float]
    max_c_asymmetry: float
    min_c_eigenvalue: Optional[float]
    decay_gap: float
    passed: bool
    messages: list[str] = []


def screen_admissibility(sd: ScatteringData, *, unitarity_tol: Optional[float] = None) -> AdmissibilityReport:
    """Check the necessary conditions on scattering data. Never raises."""
    unitarity_tol = run_defaults.UNITARITY_TOL if unitarity_tol is None else unitarity_tol
    messages: list[str] = []

    worst = float(np.max(sd.unitarity_defects()))
    if worst > unitarity_tol:
        messages.append(f"S is not unitary (max ‖S†S − I‖_F = {worst:.3e})")

    uhat = sd.Uhat
    uhat_defect = float(hermitian_defect(uhat)) + float(frobenius(uhat @ uhat - np.eye(sd.n)))
    if uhat_defect > 1e-8:
        messages.append(f"Û is not a hermitian involution (defect {uhat_defect:.3e})")

    kappas = [bs.kappa for bs in sd.bound_states]
    min_kappa = min(kappas) if kappas else None
    if min_kappa is not None and min_kappa <= 0.0:
        messages.append(f"bound state with κ = {min_kappa} ≤ 0")

    asym, min_eig = 0.0, None
    for bs in sd.bound_states:
        if bs.C is None:
            messages.append(f"bound state κ = {bs.kappa:.6g} has no normalisation matrix")
            continue
        asym = max(asym, float(hermitian_defect(bs.C)))
        low = float(np.min(np.linalg.eigvalsh(hermitian_part(bs.C))))
        min_eig = low if min_eig is None else min(min_eig, low)
    if asym > 1e-8:
        messages.append(f"normalisation matrix is not hermitian (defect {asym:.3e})")
    if min_eig is not None and min_eig < -1e-10:
        messages.append(f"normalisation matrix has negative eigenvalue {min_eig:.3e}")

    passed = not messages
    if passed:
        logger.info("✓ scattering data passed the admissibility screen")
    else:
        logger.warning(f"✗ admissibility screen: {'; '.join(messages)}")
    return AdmissibilityReport(
        max_unitarity_defect=worst,
        uhat_defect=uhat_defect,
        min_kappa=min_kappa,
        max_c_asymmetry=asym,
        min_c_eigenvalue=min_eig,
        decay_gap=sd.decay_gap(),
        passed=passed,
        messages=messages,
    )


class InversionDiagnostics(BaseModel):
    T: float
    g_asymmetry: float
    marchenko_max_residual: float
    marchenko_min_rcond: float
    roughness: float
    u_spread: float
    u_unitarity_defect: float
    u_probes: list[float]
    admissibility: AdmissibilityReport


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Recovered Q on ``xgrid`` and U with the residual diagnostics."""

    xgrid: np.ndarray
    Q: np.ndarray
    U: np.ndarray
    kernel: MarchenkoKernel
    boundary: BoundaryRecovery
    diagnostics: InversionDiagnostics

    def as_potential(self) -> PotentialSpec:
        return sampled_potential(self.xgrid, self.Q)


def truncation_length(sd: ScatteringData, x_max: float) -> float:
    """T = max(x_max + 1, 10/min κ, T_MIN)."""
    t = max(x_max + 1.0, inverse_config.T_MIN)
    if sd.bound_states:
        t = max(t, 10.0 / min(bs.kappa for bs in sd.bound_states))
    return float(t)


def invert_full(
    sd: ScatteringData,
    xgrid,
    *,
    force: bool = False,
    T: Optional[float] = None,
    unitarity_tol: Optional[float] = None,
) -> ReconstructionResult:
    """
    Run kernel_G → Marchenko → Q and U recovery.

    Raises:
        ValidationError: xgrid is not uniform, ascending and starting at 0
        InadmissibleData: the screen failed and ``force`` is not set
        InsufficientDecay, IllConditioned, GridTooCoarse, SingularDenominator:
            from the stages
    """
    xgrid = np.asarray(xgrid, dtype=float)
    if xgrid.ndim != 1 or xgrid.size < 5 or xgrid[0] != 0.0 or np.any(np.diff(xgrid) <= 0.0):
        raise ValidationError("x-grid must be ascending, start at 0 and hold at least 5 points")

    report = screen_admissibility(sd, unitarity_tol=unitarity_tol)
    if not report.passed:
        if not force:
            raise InadmissibleData("; ".join(report.messages))
        logger.warning("continuing with inadmissible data (forced)")

    T = truncation_length(sd, float(xgrid[-1])) if T is None else float(T)
    G = sample_kernel(sd, 2.0 * T)
    kernel = solve_marchenko_kernel(G, xgrid, T)
    q, roughness = recover_potential(xgrid, kernel.K_diag)
    row0 = kernel.rows[0]
    boundary = recover_boundary(sd, row0)

    u_defect = boundary.unitarity_before_projection
    diagnostics = InversionDiagnostics(
        T=T,
        g_asymmetry=G.asymmetry,
        marchenko_max_residual=kernel.max_residual,
        marchenko_min_rcond=kernel.min_rcond,
        roughness=roughness,
        u_spread=boundary.spread,
        u_unitarity_defect=u_defect,
        u_probes=boundary.probes,
        admissibility=report,
    )
    logger.info(
        f"✓ inversion done: max Marchenko residual {kernel.max_residual:.2e}, U spread {boundary.spread:.2e}"
    )
    return ReconstructionResult(
        xgrid=xgrid, Q=q, U=boundary.U, kernel=kernel, boundary=boundary, diagnostics=diagnostics
    )
