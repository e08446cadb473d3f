"""
Closed-form one-bound-state data without reflection.

With G(t) = γe^{−κt}·uu† (u a unit vector) the Marchenko equation has the
separable solution

    K(x,y) = −γe^{−κ(x+y)}·uu† / (1 + γe^{−2κx}/(2κ))

and Q(x) = −4κw/(1 + w/(2κ))²·uu† with w = γe^{−2κx}.
"""

from typing import Optional

import numpy as np

from scatter_lens.config import run_defaults
from scatter_lens.direct.bound_states import BoundState
from scatter_lens.direct.scattering import ScatteringData
from scatter_lens.exceptions import ValidationError
from scatter_lens.spectral.grids import KGrid, uniform_kgrid


def _direction(direction, n: Optional[int]) -> np.ndarray:
    if direction is None:
        u = np.zeros(n or 1, dtype=complex)
        u[0] = 1.0
        return u
    u = np.atleast_1d(np.asarray(direction, dtype=complex))
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise ValidationError("direction vector must be nonzero")
    return u / norm


def _check(kappa: float, gamma: float) -> None:
    if kappa <= 0.0 or gamma <= 0.0:
        raise ValidationError(f"reflectionless data needs κ > 0 and γ > 0, got κ={kappa}, γ={gamma}")


def reflectionless_data(
    kappa: float,
    gamma: float,
    kgrid: Optional[KGrid] = None,
    *,
    direction=None,
    n: Optional[int] = None,
) -> ScatteringData:
    """S ≡ Û = I on ``kgrid`` and one bound state with C² = γuu†."""
    _check(kappa, gamma)
    u = _direction(direction, n)
    dim = u.size
    kgrid = kgrid if kgrid is not None else uniform_kgrid(run_defaults.K_MAX, run_defaults.N_K)
    projector = np.outer(u, u.conj())
    state = BoundState(
        kappa=float(kappa),
        P=projector,
        multiplicity=1,
        A_l=projector / gamma,
        C=np.sqrt(gamma) * projector,
    )
    eye = np.eye(dim, dtype=complex)
    return ScatteringData(
        kgrid=kgrid,
        S=np.broadcast_to(eye, (kgrid.size, dim, dim)).copy(),
        Uhat=eye,
        bound_states=[state],
    )


def reflectionless_kernel(kappa: float, gamma: float, x, y, *, direction=None, n: Optional[int] = None):
    """K(x,y) on the outer product of ``x`` and ``y``, shape (len(x), len(y), n, n)."""
    _check(kappa, gamma)
    u = _direction(direction, n)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    scalar = -gamma * np.exp(-kappa * (x[:, None] + y[None, :]))
    scalar /= (1.0 + gamma * np.exp(-2.0 * kappa * x) / (2.0 * kappa))[:, None]
    return scalar[:, :, None, None] * np.outer(u, u.conj())


def reflectionless_potential(kappa: float, gamma: float, x, *, direction=None, n: Optional[int] = None):
    """Q(x), shape (len(x), n, n)."""
    _check(kappa, gamma)
    u = _direction(direction, n)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    w = gamma * np.exp(-2.0 * kappa * x)
    q = -4.0 * kappa * w / (1.0 + w / (2.0 * kappa)) ** 2
    return q[:, None, None] * np.outer(u, u.conj())
