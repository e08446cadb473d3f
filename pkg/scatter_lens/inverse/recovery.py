"""Recovery of Q(x) and U from a solved Marchenko kernel."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from scatter_lens.config import inverse_config
from scatter_lens.direct.scattering import ScatteringData
from scatter_lens.exceptions import GridTooCoarse, SingularDenominator, ValidationError
from scatter_lens.utils.linalg import dagger, frobenius, nearest_unitary, unitarity_defect
from scatter_lens.utils.logger import get_logger

from .marchenko import MarchenkoRow

logger = get_logger(__name__)


def _uniform_spacing(xgrid: np.ndarray) -> float:
    h = np.diff(xgrid)
    if xgrid.size < 5 or not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
        raise ValidationError("potential recovery needs a uniform x-grid with at least 5 points")
    return float(h[0])


def fourth_order_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """d/dx along axis 0: central 5-point stencil, one-sided 4th order at the ends."""
    d = np.empty_like(f)
    d[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def recover_potential(
    xgrid, k_diag: np.ndarray, *, roughness_limit: Optional[float] = None
) -> tuple[np.ndarray, float]:
    """
    Q(x) = −2 dK(x,x)/dx on a uniform grid, hermitian-symmetrised.

    Returns (Q samples of shape (len(xgrid), n, n), roughness) where the
    roughness is the relative L² gap between the 4th- and 2nd-order estimates.

    Raises:
        ValidationError: non-uniform grid or fewer than 5 points
        GridTooCoarse: roughness above ``roughness_limit``
    """
    roughness_limit = inverse_config.ROUGHNESS_LIMIT if roughness_limit is None else roughness_limit
    xgrid = np.asarray(xgrid, dtype=float)
    h = _uniform_spacing(xgrid)
    k_diag = np.asarray(k_diag, dtype=complex)

    q = -2.0 * fourth_order_derivative(k_diag, h)
    q_low = -2.0 * np.gradient(k_diag, h, axis=0, edge_order=2)
    norm = float(np.sqrt(np.sum(np.abs(q) ** 2)))
    roughness = float(np.sqrt(np.sum(np.abs(q - q_low) ** 2))) / norm if norm > 0.0 else 0.0
    if roughness > roughness_limit:
        raise GridTooCoarse(
            f"derivative stencils disagree by {roughness:.2e} (relative L²); refine the x-grid"
        )

    asym = float(np.max(frobenius(q - dagger(q)), initial=0.0))
    if asym > inverse_config.HERMITIAN_WARN_TOL:
        logger.warning(f"✗ recovered Q asymmetry {asym:.3e} before symmetrisation")
    q = 0.5 * (q + dagger(q))
    logger.debug(f"Q recovered on {xgrid.size} points (roughness {roughness:.2e})")
    return q, roughness


@dataclass(frozen=True, eq=False)
class BoundaryRecovery:
    """U from the scattered wave at the origin, averaged over probe frequencies."""

    U: np.ndarray
    probes: list[float]
    skipped: list[float]
    spread: float
    unitarity_before_projection: float


def jost_from_kernel(row: MarchenkoRow, k: float) -> tuple[np.ndarray, ...]:
    """F(0,±k) and F_x(0,±k) from K(0,·) and K_x(0,·).

    F(0,k) = I + ∫K(0,t)e^{ikt}dt and F_x(0,k) = ikI − K(0,0) + ∫K_x(0,t)e^{ikt}dt.
    """
    if row.K_x is None:
        raise ValidationError("the x = 0 Marchenko row carries no K_x")
    n = row.K.shape[1]
    eye = np.eye(n)
    out = []
    for sign in (1.0, -1.0):
        phase = row.weights * np.exp(1j * sign * k * row.nodes)
        f0 = eye + np.einsum("j,jab->ab", phase, row.K)
        fx0 = 1j * sign * k * eye - row.K_diag + np.einsum("j,jab->ab", phase, row.K_x)
        out.extend([f0, fx0])
    return tuple(out)


def probe_indices(k_values: np.ndarray, count: int) -> np.ndarray:
    """Grid indices nearest to ``count`` log-spaced targets in [1, k_max/2]."""
    k_max = float(k_values[-1])
    upper = max(k_max / 2.0, min(1.0, k_max))
    targets = np.geomspace(min(1.0, upper), upper, count)
    idx = np.abs(k_values[None, :] - targets[:, None]).argmin(axis=1)
    return np.unique(idx)


def recover_boundary(
    sd: ScatteringData,
    row0: MarchenkoRow,
    *,
    probe_count: Optional[int] = None,
    condition_limit: Optional[float] = None,
) -> BoundaryRecovery:
    """
    U = (Ψ − iΨ_x)(Ψ + iΨ_x)⁻¹ at x = 0 with Ψ = F₋ + F₊S.

    U is evaluated at probe frequencies of the k-grid, averaged and projected
    to the nearest unitary matrix; ``spread`` is the RMS Frobenius distance
    of the individual estimates from the average.

    Raises:
        SingularDenominator: Ψ + iΨ_x is singular at every probe
    """
    probe_count = inverse_config.PROBE_COUNT if probe_count is None else probe_count
    condition_limit = inverse_config.CONDITION_LIMIT if condition_limit is None else condition_limit
    k_values = sd.kgrid.k_values

    estimates, used, skipped = [], [], []
    for j in probe_indices(k_values, probe_count):
        k = float(k_values[j])
        f_p, fx_p, f_m, fx_m = jost_from_kernel(row0, k)
        s = sd.S[j]
        psi = f_m + f_p @ s
        psi_x = fx_m + fx_p @ s
        denominator = psi + 1j * psi_x
        if np.linalg.cond(denominator) > condition_limit:
            logger.debug(f"probe k = {k:.4g} skipped: singular Ψ + iΨ_x")
            skipped.append(k)
            continue
        estimates.append(np.linalg.solve(denominator.T, (psi - 1j * psi_x).T).T)
        used.append(k)

    if not estimates:
        raise SingularDenominator(f"Ψ(0) + iΨ_x(0) is singular at every probe k in {skipped}")

    stack = np.stack(estimates)
    mean = stack.mean(axis=0)
    spread = float(np.sqrt(np.mean(frobenius(stack - mean) ** 2)))
    defect = float(unitarity_defect(mean))
    u = nearest_unitary(mean)
    logger.info(f"✓ U recovered from {len(used)} probe(s), spread {spread:.2e}")
    return BoundaryRecovery(
        U=u, probes=used, skipped=skipped, spread=spread, unitarity_before_projection=defect
    )
