"""
Star graphs: n half-lines joined at one vertex with a diagonal potential.

For diagonal Q and a diagonal boundary matrix the matrix problem splits into
n scalar problems. Each edge carries its reflection coefficient
R_i(k) = S_ii(k) and normalisation constants γ_{l,i} = (C_l²)_ii, and is
inverted with the scalar Marchenko pipeline.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from scatter_lens.direct.bound_states import BoundState
from scatter_lens.direct.scattering import ScatteringData
from scatter_lens.exceptions import GridMismatch, NotDiagonal
from scatter_lens.inverse.pipeline import invert_full, truncation_length
from scatter_lens.spectral.grids import KGrid
from scatter_lens.spectral.potential import PotentialSpec, sampled_potential, validate_potential
from scatter_lens.utils.linalg import frobenius
from scatter_lens.utils.logger import get_logger

logger = get_logger(__name__)

DIAGONAL_TOL = 1e-6
_GAMMA_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class StarBoundState:
    kappa: float
    gamma: np.ndarray


@dataclass(frozen=True, eq=False)
class StarScatteringData:
    """Per-edge reflection coefficients R (shape (n, len(kgrid))) and γ."""

    kgrid: KGrid
    R: np.ndarray
    uhat: np.ndarray
    bound_states: list[StarBoundState] = field(default_factory=list)

    @property
    def n(self) -> int:
        return int(self.R.shape[0])

    def edge(self, i: int) -> ScatteringData:
        """Scalar scattering data of edge ``i``; bound states with γ_{l,i} ≈ 0 are dropped."""
        one = np.ones((1, 1))
        states = [
            BoundState(
                kappa=bs.kappa,
                P=one,
                multiplicity=1,
                A_l=one / bs.gamma[i],
                C=np.sqrt(bs.gamma[i]) * one,
            )
            for bs in self.bound_states
            if bs.gamma[i] > _GAMMA_FLOOR
        ]
        return ScatteringData(
            kgrid=self.kgrid,
            S=self.R[i][:, None, None],
            Uhat=np.array([[self.uhat[i]]], dtype=complex),
            bound_states=states,
        )


def _off_diagonal(a: np.ndarray) -> np.ndarray:
    idx = np.arange(a.shape[-1])
    off = a.copy()
    off[..., idx, idx] = 0.0
    return off


def extract_star_data(sd: ScatteringData, *, tol: float = DIAGONAL_TOL) -> StarScatteringData:
    """
    Diagonal extraction of S and of C_l².

    Raises:
        NotDiagonal: at some k the off-diagonal mass of S exceeds tol·‖S‖_F,
            or Û is not diagonal (a coupling vertex condition)
    """
    off = frobenius(_off_diagonal(sd.S))
    limit = tol * frobenius(sd.S)
    bad = np.flatnonzero(off > limit)
    if bad.size:
        j = int(bad[0])
        raise NotDiagonal(
            f"S is not diagonal at k = {sd.kgrid.k_values[j]:.6g} "
            f"(off-diagonal mass {off[j]:.3e}); the vertex condition couples the edges"
        )
    if float(frobenius(_off_diagonal(sd.Uhat))) > tol:
        raise NotDiagonal("Û is not diagonal; a coupling vertex condition is not supported")

    R = np.ascontiguousarray(np.diagonal(sd.S, axis1=1, axis2=2).T)
    uhat = np.sign(np.real(np.diag(sd.Uhat)))
    over = float(np.max(np.abs(R)) - 1.0)
    if over > tol:
        logger.warning(f"✗ |R_i(k)| exceeds 1 by {over:.3e}")

    states = []
    for bs in sd.bound_states:
        gamma = np.real(np.diag(bs.C @ bs.C))
        if np.any(gamma < -tol):
            logger.warning(f"✗ negative normalisation constant at κ = {bs.kappa:.6g}: {gamma}")
        states.append(StarBoundState(kappa=bs.kappa, gamma=np.clip(gamma, 0.0, None)))
    logger.info(f"✓ star data extracted: {R.shape[0]} edge(s), {len(states)} bound state(s)")
    return StarScatteringData(kgrid=sd.kgrid, R=R, uhat=uhat, bound_states=states)


@dataclass(frozen=True, eq=False)
class EdgeReconstruction:
    """Real scalar potential of one edge and its recovered boundary phase."""

    edge: int
    xgrid: np.ndarray
    q: np.ndarray
    u: complex
    imaginary_residue: float
    marchenko_residual: float

    @property
    def robin_slope(self) -> float:
        """h with f_x(0) = h f(0); infinite for a Dirichlet edge."""
        if abs(self.u + 1.0) < 1e-12:
            return float("inf")
        return float(-np.tan(0.5 * np.angle(self.u)))


def scalar_marchenko_invert(
    star: StarScatteringData, i: int, xgrid, *, force: bool = False, T: Optional[float] = None
) -> EdgeReconstruction:
    """Run the scalar inverse pipeline on edge ``i``; returns the real part of Q_i."""
    result = invert_full(star.edge(i), xgrid, force=force, T=T)
    q = result.Q[:, 0, 0]
    residue = float(np.max(np.abs(q.imag), initial=0.0))
    if residue > 1e-8:
        logger.warning(f"✗ edge {i}: imaginary residue {residue:.3e} in the recovered potential")
    return EdgeReconstruction(
        edge=i,
        xgrid=result.xgrid,
        q=q.real.copy(),
        u=complex(result.U[0, 0]),
        imaginary_residue=residue,
        marchenko_residual=result.diagnostics.marchenko_max_residual,
    )


def assemble_diagonal(edges: list[EdgeReconstruction]) -> PotentialSpec:
    """
    diag(Q_1, …, Q_n) as a sampled potential on the common x-grid.

    Raises:
        GridMismatch: the edges were reconstructed on different grids
    """
    if not edges:
        raise GridMismatch("no edges to assemble")
    xgrid = edges[0].xgrid
    for e in edges[1:]:
        if e.xgrid.shape != xgrid.shape or not np.array_equal(e.xgrid, xgrid):
            raise GridMismatch(f"edge {e.edge} uses a different x-grid than edge {edges[0].edge}")
    n = len(edges)
    values = np.zeros((xgrid.size, n, n), dtype=complex)
    idx = np.arange(n)
    values[:, idx, idx] = np.stack([e.q for e in edges], axis=1)
    potential = sampled_potential(xgrid, values)
    validate_potential(potential)
    return potential


@dataclass(frozen=True, eq=False)
class StarReconstruction:
    edges: list[EdgeReconstruction]
    potential: PotentialSpec

    @property
    def U(self) -> np.ndarray:
        """Diagonal vertex condition assembled from the per-edge phases."""
        return np.diag([e.u for e in self.edges])


def invert_star(sd: ScatteringData, xgrid, *, force: bool = False) -> StarReconstruction:
    """
    Extract per-edge data, invert every edge and assemble the diagonal potential.

    All edges share the truncation length of the full data set.
    """
    star = extract_star_data(sd)
    T = truncation_length(sd, float(np.asarray(xgrid)[-1]))
    edges = [scalar_marchenko_invert(star, i, xgrid, force=force, T=T) for i in range(star.n)]
    return StarReconstruction(edges=edges, potential=assemble_diagonal(edges))
