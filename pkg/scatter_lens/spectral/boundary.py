"""
Selfadjoint boundary conditions at the origin.

A unitary n×n matrix U fixes the condition

    (i/2)(U† − I) f(0) + (1/2)(U† + I) f_x(0) = 0

and the entire solution Ξ with Ξ(0) = A = (U + I)/2, Ξ_x(0) = B = i(U − I)/2.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from scatter_lens.config import spectral_config
from scatter_lens.exceptions import (
    EigendecompositionFailure,
    NonSquare,
    NonUnitary,
    ShapeMismatch,
)
from scatter_lens.utils.linalg import dagger, frobenius, nearest_unitary, unitarity_defect
from scatter_lens.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class BoundaryCondition:
    """Unitary boundary matrix U with the derived A and B."""

    n: int
    U: np.ndarray
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)

    def selfadjoint_defect(self) -> float:
        """‖A†B − B†A‖_F."""
        return float(frobenius(dagger(self.A) @ self.B - dagger(self.B) @ self.A))

    def completeness_defect(self) -> float:
        """‖AA† + BB† − I‖_F."""
        gram = self.A @ dagger(self.A) + self.B @ dagger(self.B)
        return float(frobenius(gram - np.eye(self.n)))


def build_boundary(U, tol: Optional[float] = None) -> BoundaryCondition:
    """
    Build a BoundaryCondition from a unitary matrix.

    U is admitted when ‖U†U − I‖_F ≤ tol and is then replaced by the unitary
    factor of its polar decomposition, so the algebraic identities of A and B
    hold to working precision.

    Args:
        U: square complex matrix (a scalar is read as a 1×1 matrix)
        tol: admission tolerance (default SCATTER_UNITARY_ADMISSION_TOL)

    Raises:
        NonSquare: U is not a square matrix
        NonUnitary: ‖U†U − I‖_F exceeds tol
    """
    tol = spectral_config.UNITARY_ADMISSION_TOL if tol is None else tol
    u = np.atleast_2d(np.asarray(U, dtype=complex))
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NonSquare(f"boundary matrix must be square, got shape {u.shape}")

    defect = float(unitarity_defect(u))
    if defect > tol:
        raise NonUnitary(f"‖U†U − I‖_F = {defect:.3e} exceeds admission tolerance {tol:.1e}")

    u = nearest_unitary(u)
    logger.debug(f"U admitted (‖U†U − I‖_F = {defect:.2e}), re-projected to unitary")
    n = u.shape[0]
    eye = np.eye(n)
    a = 0.5 * (u + eye)
    b = 0.5j * (u - eye)
    u.setflags(write=False)
    a.setflags(write=False)
    b.setflags(write=False)
    return BoundaryCondition(n=n, U=u, A=a, B=b)


def dirichlet(n: int = 1) -> BoundaryCondition:
    return build_boundary(-np.eye(n))


def neumann(n: int = 1) -> BoundaryCondition:
    return build_boundary(np.eye(n))


def robin_boundary(h) -> BoundaryCondition:
    """Diagonal boundary condition f_x(0) = h f(0) per channel.

    Each slope h maps to the eigenvalue (1 − ih)/(1 + ih) of U.
    """
    h = np.atleast_1d(np.asarray(h, dtype=float))
    return build_boundary(np.diag((1.0 - 1j * h) / (1.0 + 1j * h)))


def _unitary_eigensystem(bc: BoundaryCondition) -> tuple[np.ndarray, np.ndarray]:
    # Complex Schur form of a normal matrix is diagonal with a unitary basis.
    t, z = linalg.schur(bc.U, output="complex")
    off = float(frobenius(t - np.diag(np.diag(t))))
    if off > 1e-8:
        raise EigendecompositionFailure(
            f"Schur form of U is not diagonal (off-diagonal mass {off:.3e})"
        )
    return np.diag(t), z


def _is_minus_one(z: np.ndarray, angle_tol: float) -> np.ndarray:
    return np.abs(np.angle(-z)) < angle_tol


def compute_uhat(bc: BoundaryCondition, angle_tol: Optional[float] = None) -> np.ndarray:
    """
    High-energy limit Û of the scattering matrix.

    Every eigenvalue of U within ``angle_tol`` radians of −1 is mapped to −1,
    every other eigenvalue to +1; the eigenvectors are kept.

    Raises:
        EigendecompositionFailure: the numerical eigenbasis of U is defective
    """
    angle_tol = spectral_config.UHAT_ANGLE_TOL if angle_tol is None else angle_tol
    eigvals, z = _unitary_eigensystem(bc)
    signs = np.where(_is_minus_one(eigvals, angle_tol), -1.0, 1.0)
    uhat = (z * signs) @ dagger(z)
    # Û is hermitian by construction; remove rounding asymmetry
    return 0.5 * (uhat + dagger(uhat))


def robin_parameters(bc: BoundaryCondition, angle_tol: Optional[float] = None) -> np.ndarray:
    """Slopes h_j = −tan(θ_j/2) for the eigenvalues e^{iθ_j} of U away from −1."""
    angle_tol = spectral_config.UHAT_ANGLE_TOL if angle_tol is None else angle_tol
    eigvals, _ = _unitary_eigensystem(bc)
    keep = ~_is_minus_one(eigvals, angle_tol)
    return -np.tan(0.5 * np.angle(eigvals[keep]))


def boundary_operator(f0, fx0, bc: BoundaryCondition) -> np.ndarray:
    """(i/2)(U† − I)·f0 + (1/2)(U† + I)·fx0."""
    f0 = np.asarray(f0, dtype=complex)
    fx0 = np.asarray(fx0, dtype=complex)
    if f0.shape != fx0.shape:
        raise ShapeMismatch(f"f0 shape {f0.shape} differs from fx0 shape {fx0.shape}")
    if f0.ndim not in (1, 2) or f0.shape[0] != bc.n:
        raise ShapeMismatch(f"expected leading dimension {bc.n}, got shape {f0.shape}")
    ud = dagger(bc.U)
    eye = np.eye(bc.n)
    return 0.5j * (ud - eye) @ f0 + 0.5 * (ud + eye) @ fx0


def boundary_residual(f0, fx0, bc: BoundaryCondition) -> float:
    """Frobenius norm of the boundary operator; zero iff the condition holds.

    Raises:
        ShapeMismatch: shapes of f0 and fx0 differ or do not match n
    """
    return float(np.linalg.norm(boundary_operator(f0, fx0, bc)))
