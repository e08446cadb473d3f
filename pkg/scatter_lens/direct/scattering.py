"""Direct problem orchestration: (Q, U) → scattering data."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from scatter_lens.config import direct_config, run_defaults
from scatter_lens.exceptions import ShapeMismatch
from scatter_lens.spectral.boundary import BoundaryCondition, compute_uhat
from scatter_lens.spectral.grids import KGrid
from scatter_lens.spectral.potential import PotentialSpec
from scatter_lens.utils.linalg import frobenius, unitarity_defect
from scatter_lens.utils.logger import get_logger

from .bound_states import BoundState, check_no_virtual_levels, find_bound_states, normalization_matrices
from .jost import scattering_matrices

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ScatteringData:
    """S on a k-grid, its high-energy limit Û and the normalised bound states."""

    kgrid: KGrid
    S: np.ndarray
    Uhat: np.ndarray
    bound_states: list[BoundState] = field(default_factory=list)

    def __post_init__(self):
        s = np.asarray(self.S, dtype=complex)
        if s.ndim != 3 or s.shape[0] != self.kgrid.size or s.shape[1] != s.shape[2]:
            raise ShapeMismatch(f"S has shape {s.shape}, expected ({self.kgrid.size}, n, n)")
        if self.Uhat.shape != s.shape[1:]:
            raise ShapeMismatch(f"Û has shape {self.Uhat.shape}, expected {s.shape[1:]}")
        object.__setattr__(self, "S", s)

    @property
    def n(self) -> int:
        return int(self.S.shape[1])

    def unitarity_defects(self) -> np.ndarray:
        return unitarity_defect(self.S)

    def decay_gap(self) -> float:
        """‖S(k_max) − Û‖_F."""
        return float(frobenius(self.S[-1] - self.Uhat))


def compute_scattering_data(
    p: PotentialSpec,
    bc: BoundaryCondition,
    kgrid: KGrid,
    *,
    kappa_range: Optional[tuple[float, float]] = None,
    unitarity_tol: Optional[float] = None,
) -> ScatteringData:
    """
    Solve the direct problem on ``kgrid``.

    Grid points below SCATTER_K_MIN are evaluated at K_MIN. Unitarity
    violations above ``unitarity_tol`` and suspected virtual levels are logged
    as warnings; they do not abort the computation.

    Raises:
        ShapeMismatch: the potential and boundary sizes differ
        SingularMinus: M₋ is numerically singular at a grid point
    """
    if p.n != bc.n:
        raise ShapeMismatch(f"potential is {p.n}×{p.n} but U is {bc.n}×{bc.n}")
    unitarity_tol = run_defaults.UNITARITY_TOL if unitarity_tol is None else unitarity_tol

    ks = np.maximum(kgrid.k_values, direct_config.K_MIN)
    s = scattering_matrices(p, bc, ks)
    defects = unitarity_defect(s)
    for k, defect in zip(kgrid.k_values, defects):
        logger.debug(f"k = {k:.6g}: ‖S†S − I‖ = {float(defect):.2e}")

    worst = float(np.max(defects))
    if worst > unitarity_tol:
        logger.warning(f"✗ max ‖S†S − I‖_F = {worst:.3e} exceeds {unitarity_tol:.1e}")
    else:
        logger.info(f"✓ S computed on {kgrid.size} k-points (max ‖S†S − I‖_F = {worst:.2e})")

    check_no_virtual_levels(p, bc)
    states = [normalization_matrices(p, bc, bs) for bs in find_bound_states(p, bc, kappa_range)]
    return ScatteringData(kgrid=kgrid, S=s, Uhat=compute_uhat(bc), bound_states=states)
