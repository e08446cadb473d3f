"""
Small matrix and quadrature helpers shared by the solvers.

Arrays of matrices are stacked along the leading axes; every helper acts on
the last two axes.
"""

from functools import lru_cache
from typing import Union

import numpy as np
from scipy import linalg


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def frobenius(a: np.ndarray) -> Union[np.ndarray, float]:
    """Frobenius norm over the last two axes."""
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + dagger(a))


def hermitian_defect(a: np.ndarray) -> Union[np.ndarray, float]:
    """‖A − A†‖_F, elementwise over a stack."""
    return frobenius(a - dagger(a))


def unitarity_defect(u: np.ndarray) -> Union[np.ndarray, float]:
    """‖U†U − I‖_F, elementwise over a stack."""
    n = u.shape[-1]
    return frobenius(dagger(u) @ u - np.eye(n))


def nearest_unitary(a: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition A = W P."""
    w, _ = linalg.polar(a)
    return w


def inverse_sqrt_hpd(b: np.ndarray) -> np.ndarray:
    """Principal B^{-1/2} of a hermitian positive definite matrix.

    Raises:
        np.linalg.LinAlgError: if B has a nonpositive eigenvalue.
    """
    w, v = np.linalg.eigh(hermitian_part(b))
    if np.any(w <= 0.0):
        raise np.linalg.LinAlgError(f"matrix is not positive definite (min eigenvalue {w.min():.3e})")
    return (v * (1.0 / np.sqrt(w))) @ dagger(v)


def null_projector(m: np.ndarray, rank_tol: float) -> tuple[np.ndarray, int, np.ndarray]:
    """Orthogonal projector onto the numerical null space of ``m``.

    Singular values below ``rank_tol * σ_max`` count as zero.

    Returns:
        (P, dimension, singular values in descending order)
    """
    _, s, vh = np.linalg.svd(m)
    cutoff = rank_tol * max(float(s[0]), np.finfo(float).tiny)
    null = vh[s < cutoff].conj().T
    projector = null @ null.conj().T
    return projector, int(null.shape[1]), s


@lru_cache(maxsize=32)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def composite_gauss_legendre(
    a: float, b: float, panels: int, order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss–Legendre rule on [a, b]."""
    if b <= a:
        return np.empty(0), np.empty(0)
    xi, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * xi[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
