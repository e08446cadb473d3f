"""
Jost functions, the matrices M±(k) and the scattering matrix.

Notation: F₊(k) = F(0,k), F₋(k) = F(0,−k) and Y†(k) = Y(k̄)*. Then

    M±(k) = ±(1/2ik)·[F±†B − F±,ₓ†A]
    S(k)  = M₊(k)·M₋(k)⁻¹

so that the entire solution Ξ = ΘA + ΦB splits as Ξ = F₋M₋ + F₊M₊ and the
scattered wave is Ψ = ΞM₋⁻¹ = F₋ + F₊S.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from scatter_lens.config import direct_config
from scatter_lens.exceptions import SingularMinus
from scatter_lens.spectral.boundary import BoundaryCondition, boundary_residual
from scatter_lens.spectral.potential import PotentialSpec
from scatter_lens.utils.linalg import dagger, frobenius

from .integrator import jost_functions, jost_functions_batch, jost_solution, standard_solutions

_REAL_AXIS_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class JostData:
    """Jost functions at k and at −k̄ with the derived M±.

    ``M_plus`` is only available on the real axis, where F(0,k̄) is defined.
    """

    k: complex
    F0: np.ndarray
    Fx0: np.ndarray
    F0_minus: np.ndarray
    Fx0_minus: np.ndarray
    M_plus: Optional[np.ndarray] = None
    M_minus: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.F0.shape[0]

    @property
    def is_real(self) -> bool:
        return abs(self.k.imag) <= _REAL_AXIS_TOL * max(1.0, abs(self.k))


def _bracket(f0: np.ndarray, fx0: np.ndarray, bc: BoundaryCondition) -> np.ndarray:
    return dagger(f0) @ bc.B - dagger(fx0) @ bc.A


def m_matrices(jd: JostData, bc: BoundaryCondition) -> tuple[Optional[np.ndarray], np.ndarray]:
    """
    (M₊, M₋) from the Jost functions in ``jd``.

    Off the real axis only M₋ is returned (M₊ is None); it uses F(0,−k̄),
    which lies in the closed upper half-plane.
    """
    k = jd.k
    m_minus = -_bracket(jd.F0_minus, jd.Fx0_minus, bc) / (2j * k)
    m_plus = _bracket(jd.F0, jd.Fx0, bc) / (2j * k) if jd.is_real else None
    return m_plus, m_minus


def _check_minus(m_minus: np.ndarray, k: complex, limit: Optional[float]) -> None:
    limit = direct_config.MINUS_CONDITION_LIMIT if limit is None else limit
    cond = float(np.linalg.cond(m_minus))
    if not np.isfinite(cond) or cond > limit:
        raise SingularMinus(f"M₋({k.real:.6g}) has condition number {cond:.3e} > {limit:.1e}")


def jost_data(
    p: PotentialSpec,
    bc: BoundaryCondition,
    k: complex,
    *,
    condition_limit: Optional[float] = None,
) -> JostData:
    """
    Jost functions at k and −k̄ together with M±.

    Raises:
        SingularMinus: k is real and M₋(k) is numerically singular
        UnsupportedK: Im k < 0
    """
    k = complex(k)
    f0, fx0 = jost_functions(p, k)
    if abs(k.imag) <= _REAL_AXIS_TOL * max(1.0, abs(k)):
        k = complex(k.real, 0.0)
        f0m, fx0m = jost_functions(p, -k)
    elif k.real == 0.0:
        f0m, fx0m = f0, fx0
    else:
        f0m, fx0m = jost_functions(p, -k.conjugate())

    jd = JostData(k=k, F0=f0, Fx0=fx0, F0_minus=f0m, Fx0_minus=fx0m)
    m_plus, m_minus = m_matrices(jd, bc)
    if jd.is_real:
        _check_minus(m_minus, k, condition_limit)
    return JostData(
        k=k, F0=f0, Fx0=fx0, F0_minus=f0m, Fx0_minus=fx0m, M_plus=m_plus, M_minus=m_minus
    )


def scattering_matrix(jd: JostData, bc: Optional[BoundaryCondition] = None) -> np.ndarray:
    """
    S(k) = M₊M₋⁻¹ = −[F₊†B − F₊,ₓ†A][F₋†B − F₋,ₓ†A]⁻¹ for real k.

    Raises:
        SingularMinus: M₋ is numerically singular
    """
    m_plus, m_minus = (jd.M_plus, jd.M_minus)
    if m_minus is None or m_plus is None:
        if bc is None:
            raise ValueError("JostData without M± needs a boundary condition")
        m_plus, m_minus = m_matrices(jd, bc)
    _check_minus(m_minus, jd.k, None)
    # S M₋ = M₊  ⇔  M₋ᵀ Sᵀ = M₊ᵀ
    return np.linalg.solve(m_minus.T, m_plus.T).T


def scattering_matrices(
    p: PotentialSpec,
    bc: BoundaryCondition,
    ks,
    *,
    condition_limit: Optional[float] = None,
) -> np.ndarray:
    """
    S(k) for an array of real k > 0, shape (len(ks), n, n).

    F(0,±k) are integrated in stacked blocks; see ``jost_functions_batch``.

    Raises:
        SingularMinus: M₋ is numerically singular at some k
    """
    ks = np.asarray(ks, dtype=float)
    f0, fx0 = jost_functions_batch(p, np.concatenate([ks, -ks]))
    m = ks.size
    s = np.empty((m, p.n, p.n), dtype=complex)
    for j, k in enumerate(ks):
        jd = JostData(k=complex(k), F0=f0[j], Fx0=fx0[j], F0_minus=f0[m + j], Fx0_minus=fx0[m + j])
        m_plus, m_minus = m_matrices(jd, bc)
        _check_minus(m_minus, jd.k, condition_limit)
        s[j] = np.linalg.solve(m_minus.T, m_plus.T).T
    return s


def jost_identity_residuals(jd: JostData) -> tuple[float, float, float, float]:
    """
    Residuals of the four Jost-function identities on the real axis, each
    divided by 2|k|:

        F₋F₋,ₓ† − F₊F₊,ₓ† = 2ikI        F₊,ₓF₊† − F₋,ₓF₋† = 2ikI
        F₋,ₓF₋,ₓ† − F₊,ₓF₊,ₓ† = 0        F₋F₋† − F₊F₊† = 0
    """
    k = jd.k.real
    eye = np.eye(jd.n)
    fp, fpx, fm, fmx = jd.F0, jd.Fx0, jd.F0_minus, jd.Fx0_minus
    scale = 2.0 * abs(k)
    r1 = frobenius(fm @ dagger(fmx) - fp @ dagger(fpx) - 2j * k * eye)
    r2 = frobenius(fpx @ dagger(fp) - fmx @ dagger(fm) - 2j * k * eye)
    r3 = frobenius(fmx @ dagger(fmx) - fpx @ dagger(fpx))
    r4 = frobenius(fm @ dagger(fm) - fp @ dagger(fp))
    return tuple(float(r) / scale for r in (r1, r2, r3, r4))


@dataclass(frozen=True, eq=False)
class EntireSolution:
    """Ξ sampled two ways: from Θ, Φ and from the Jost basis."""

    x: np.ndarray
    from_standard: np.ndarray
    from_jost: np.ndarray

    @property
    def mismatch(self) -> float:
        return float(np.max(frobenius(self.from_standard - self.from_jost)))


def entire_solution(p: PotentialSpec, bc: BoundaryCondition, k: float, x_eval) -> EntireSolution:
    """Ξ = ΘA + ΦB and Ξ = F₋M₋ + F₊M₊ on ``x_eval`` for real k."""
    k = float(k)
    std = standard_solutions(p, k, x_eval)
    xi_std = std.Theta @ bc.A + std.Phi @ bc.B

    plus = jost_solution(p, k, std.x)
    minus = jost_solution(p, -k, std.x)
    jd = JostData(k=complex(k), F0=plus.F[0], Fx0=plus.Fx[0], F0_minus=minus.F[0], Fx0_minus=minus.Fx[0])
    m_plus, m_minus = m_matrices(jd, bc)
    xi_jost = minus.F[1:] @ m_minus + plus.F[1:] @ m_plus
    return EntireSolution(x=std.x, from_standard=xi_std, from_jost=xi_jost)


@dataclass(frozen=True, eq=False)
class ScatteredWave:
    """Ψ = F₋ + F₊S with its derivative, plus the ΞM₋⁻¹ cross-check."""

    k: float
    x: np.ndarray
    Psi: np.ndarray
    Psi_x: np.ndarray
    S: np.ndarray
    representation_mismatch: float
    boundary_residual: float


def scattered_wave(p: PotentialSpec, bc: BoundaryCondition, k: float, x_eval) -> ScatteredWave:
    """
    Scattered wave Ψ(x,k) for real k ≠ 0.

    The Jost representation F₋ + F₊S is returned; ΘA + ΦB multiplied by M₋⁻¹
    is computed alongside and the largest Frobenius gap between the two is
    stored in ``representation_mismatch``.

    Raises:
        SingularMinus: M₋(k) is numerically singular
    """
    k = float(k)
    std = standard_solutions(p, k, x_eval)
    plus = jost_solution(p, k, std.x)
    minus = jost_solution(p, -k, std.x)
    jd = JostData(k=complex(k), F0=plus.F[0], Fx0=plus.Fx[0], F0_minus=minus.F[0], Fx0_minus=minus.Fx[0])
    m_plus, m_minus = m_matrices(jd, bc)
    _check_minus(m_minus, jd.k, None)
    s = np.linalg.solve(m_minus.T, m_plus.T).T

    psi = minus.F[1:] + plus.F[1:] @ s
    psi_x = minus.Fx[1:] + plus.Fx[1:] @ s
    m_inv = np.linalg.inv(m_minus)
    psi_std = (std.Theta @ bc.A + std.Phi @ bc.B) @ m_inv
    mismatch = float(np.max(frobenius(psi - psi_std), initial=0.0))
    residual = boundary_residual(minus.F[0] + plus.F[0] @ s, minus.Fx[0] + plus.Fx[0] @ s, bc)
    return ScatteredWave(
        k=k,
        x=std.x,
        Psi=psi,
        Psi_x=psi_x,
        S=s,
        representation_mismatch=mismatch,
        boundary_residual=residual,
    )


def wronskian_drift(p: PotentialSpec, bc: BoundaryCondition, k: float, x_eval) -> float:
    """max over x of ‖W{Φ†,Ψ}(x) − W{Φ†,Ψ}(0)‖_F with W{Φ†,Ψ} = Φ*Ψ_x − Φ_x*Ψ."""
    xs = np.concatenate([[0.0], np.asarray(x_eval, dtype=float)])
    wave = scattered_wave(p, bc, k, xs)
    std = standard_solutions(p, k, xs)
    w = dagger(std.Phi) @ wave.Psi_x - dagger(std.Phi_x) @ wave.Psi
    return float(np.max(frobenius(w - w[0])))
