"""
The Marchenko kernel G(t) = Σ_l C_l² e^{−κ_l t} + (1/2π)∫(S(k) − Û)e^{ikt}dk.

The continuous part is a trapezoid sum over the symmetric grid
[−k_max, k_max], with S(−k) = S(k)⁻¹ and S(0) extrapolated from both sides.
Two tail models are subtracted from S − Û before the sum and added back
through their exact transforms:

- the boundary resolvent Û·2E(ik − E)⁻¹, where E = lim ik(ÛS + I)⁻¹(ÛS − I)
  is estimated on the upper end of the grid (exact for Q = 0);
- D₁/(ik − μ) + … + D_m/(ik − μ)^m fitted to what is left, whose transform
  vanishes for t > 0.

A raised-cosine taper over the last part of the grid damps the truncation
ringing of the remainder.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from scatter_lens.config import inverse_config
from scatter_lens.direct.scattering import ScatteringData
from scatter_lens.exceptions import InsufficientDecay, ValidationError
from scatter_lens.utils.linalg import dagger, frobenius, hermitian_part
from scatter_lens.utils.logger import get_logger

logger = get_logger(__name__)

# t-samples per Fourier block
_CHUNK = 512


def raised_cosine_taper(k: np.ndarray, fraction: float) -> np.ndarray:
    """1 on [0, (1−fraction)k_max], falling to 0 at |k| = k_max as a half cosine."""
    k_max = float(np.max(np.abs(k)))
    if fraction <= 0.0:
        return np.ones_like(k)
    start = (1.0 - fraction) * k_max
    s = np.clip((np.abs(k) - start) / (k_max - start), 0.0, 1.0)
    return 0.5 * (1.0 + np.cos(np.pi * s))


def tail_basis(k: np.ndarray, pole: float, terms: int = 2) -> np.ndarray:
    """Columns 1/(ik − pole)^m, m = 1..terms; each has a vanishing transform for t > 0."""
    first = 1.0 / (1j * np.asarray(k, dtype=float) - pole)
    return np.stack([first**m for m in range(1, terms + 1)], axis=1)


def fit_tail(
    k: np.ndarray, deviation: np.ndarray, fraction: float, pole: float, terms: int = 2
) -> tuple[np.ndarray, float]:
    """
    Least-squares fit of deviation(k) ≈ Σ_m D_m/(ik − pole)^m on the top
    ``fraction`` of a symmetric grid.

    Returns:
        (hermitian coefficients of shape (terms, n, n), relative misfit)
    """
    n = deviation.shape[-1]
    k_max = float(np.max(np.abs(k)))
    tail = np.abs(k) >= (1.0 - fraction) * k_max
    if fraction <= 0.0 or np.count_nonzero(tail) < terms:
        return np.zeros((terms, n, n), dtype=complex), 0.0
    phi = tail_basis(k[tail], pole, terms)
    r = deviation[tail].reshape(-1, n * n)
    coef, *_ = np.linalg.lstsq(phi, r, rcond=None)
    d = hermitian_part(coef.reshape(terms, n, n))
    scale = float(np.sqrt(np.sum(np.abs(r) ** 2)))
    if scale == 0.0:
        return d, 0.0
    misfit = float(np.sqrt(np.sum(np.abs(r - phi @ d.reshape(terms, -1)) ** 2))) / scale
    return d, misfit


@dataclass(frozen=True, eq=False)
class BoundaryTail:
    """
    The resolvent model Û·2E(ik − P)⁻¹ of S(k) − Û, diagonal in the
    eigenbasis of E.

    Each pole p_j equals the eigenvalue e_j of E, pushed out to |p_j| ≥ μ so
    that no pole approaches the real axis; p_j < 0 lies in the upper half
    plane and contributes 2e_j e^{p_j t} for t > 0.
    """

    uhat: np.ndarray
    generator: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray
    poles: np.ndarray

    @classmethod
    def from_generator(cls, uhat: np.ndarray, generator: np.ndarray, pole: float) -> "BoundaryTail":
        e, v = np.linalg.eigh(generator)
        p = np.where(e < 0.0, np.minimum(e, -pole), np.maximum(e, pole))
        return cls(uhat=uhat, generator=generator, eigenvalues=e, vectors=v, poles=p)

    def _assemble(self, diagonal: np.ndarray) -> np.ndarray:
        # diagonal: (..., n) → Û V diag V†
        inner = np.einsum("aj,...j,bj->...ab", self.vectors, diagonal, np.conj(self.vectors))
        return self.uhat @ inner

    def __call__(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        return self._assemble(2.0 * self.eigenvalues / (1j * k[:, None] - self.poles))

    def transform(self, t) -> np.ndarray:
        """(1/2π)∫ model(k)e^{ikt}dk for t ≥ 0 (right limit at t = 0)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        live = self.poles < 0.0
        weights = np.where(live, 2.0 * self.eigenvalues, 0.0) * np.exp(
            np.outer(t, np.where(live, self.poles, 0.0))
        )
        return self._assemble(weights)

    def transform_derivative(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        live = self.poles < 0.0
        rate = np.where(live, self.poles, 0.0)
        weights = np.where(live, 2.0 * self.eigenvalues * self.poles, 0.0) * np.exp(np.outer(t, rate))
        return self._assemble(weights)


def boundary_generator(sd: ScatteringData, fraction: float) -> np.ndarray:
    """
    E = lim_{k→∞} ik(ÛS + I)⁻¹(ÛS − I), hermitian and commuting with Û.

    E(k) is even in k; it is fitted as E₀ + E₂/k² on the top ``fraction`` of
    the grid (at least the last two points) and E₀ is returned.
    """
    k = sd.kgrid.k_values
    n = sd.n
    count = max(int(np.count_nonzero(k >= (1.0 - fraction) * sd.kgrid.k_max)), 2)
    kw = k[-count:]
    w = sd.Uhat @ sd.S[-count:]
    eye = np.eye(n)
    e_k = 1j * kw[:, None, None] * np.linalg.solve(w + eye, w - eye)
    basis = np.stack([np.ones_like(kw), 1.0 / kw**2], axis=1)
    coef, *_ = np.linalg.lstsq(basis, e_k.reshape(count, n * n), rcond=None)
    e0 = hermitian_part(coef[0].reshape(n, n))
    plus = 0.5 * (eye + sd.Uhat)
    minus = eye - plus
    return plus @ e0 @ plus + minus @ e0 @ minus


def _symmetric_grid(sd: ScatteringData) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on [−k_max, k_max] including 0, with S − Û at each."""
    if not sd.kgrid.is_uniform:
        raise ValidationError("the Fourier kernel needs a uniform k-grid k_j = j·Δk")
    k = sd.kgrid.k_values
    dev_pos = sd.S - sd.Uhat
    dev_neg = np.linalg.inv(sd.S) - sd.Uhat
    # Linear extrapolation to k = 0 from each side, averaged
    slope = (k[0] / (k[1] - k[0]))
    zero_pos = dev_pos[0] - slope * (dev_pos[1] - dev_pos[0])
    zero_neg = dev_neg[0] - slope * (dev_neg[1] - dev_neg[0])
    nodes = np.concatenate([-k[::-1], [0.0], k])
    values = np.concatenate([dev_neg[::-1], [0.5 * (zero_pos + zero_neg)], dev_pos])
    return nodes, values


def _trapezoid_weights(nodes: np.ndarray) -> np.ndarray:
    w = np.zeros_like(nodes)
    h = np.diff(nodes)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def _continuous_pieces(
    sd: ScatteringData,
    tgrid,
    *,
    taper_fraction: Optional[float] = None,
    tail_fraction: Optional[float] = None,
    tail_pole: Optional[float] = None,
    tail_terms: Optional[int] = None,
    decay_tol: Optional[float] = None,
) -> tuple[np.ndarray, BoundaryTail]:
    """The tapered trapezoid sum of the remainder on ``tgrid`` and the boundary tail."""
    cfg = inverse_config
    taper_fraction = cfg.TAPER_FRACTION if taper_fraction is None else taper_fraction
    tail_fraction = cfg.TAIL_FIT_FRACTION if tail_fraction is None else tail_fraction
    tail_pole = cfg.TAIL_POLE if tail_pole is None else tail_pole
    tail_terms = cfg.TAIL_TERMS if tail_terms is None else tail_terms
    decay_tol = cfg.DECAY_TOL if decay_tol is None else decay_tol

    gap = sd.decay_gap()
    if gap > decay_tol:
        raise InsufficientDecay(
            f"‖S(k_max) − Û‖_F = {gap:.3e} exceeds {decay_tol:.2g} at k_max = {sd.kgrid.k_max:.6g}"
        )

    nodes, values = _symmetric_grid(sd)
    tail = BoundaryTail.from_generator(sd.Uhat, boundary_generator(sd, tail_fraction), tail_pole)
    values = values - tail(nodes)
    logger.debug(f"boundary tail eigenvalues {np.array2string(tail.eigenvalues, precision=4)}")

    d, misfit = fit_tail(nodes, values, tail_fraction, tail_pole, tail_terms)
    if misfit > cfg.TAIL_MISFIT_TOL:
        logger.warning(f"✗ tail model misfit {misfit:.2e} on the upper k-range")
    else:
        logger.debug(f"tail fit max ‖D‖_F = {float(np.max(frobenius(d))):.3e}, misfit {misfit:.2e}")

    remainder = values - np.einsum("jm,mab->jab", tail_basis(nodes, tail_pole, tail_terms), d)
    weights = _trapezoid_weights(nodes) * raised_cosine_taper(nodes, taper_fraction) / (2.0 * np.pi)
    flat = weights[:, None] * remainder.reshape(nodes.size, -1)

    t = np.asarray(tgrid, dtype=float)
    n = sd.n
    out = np.empty((t.size, n * n), dtype=complex)
    for start in range(0, t.size, _CHUNK):
        block = t[start : start + _CHUNK]
        out[start : start + _CHUNK] = np.exp(1j * np.outer(block, nodes)) @ flat
    return out.reshape(t.size, n, n), tail


def continuous_part(sd: ScatteringData, tgrid, **kwargs) -> np.ndarray:
    """
    (1/2π)∫(S(k) − Û)e^{ikt}dk on ``tgrid`` (t ≥ 0), not yet symmetrised.

    Keyword arguments override ``taper_fraction``, ``tail_fraction``,
    ``tail_pole``, ``tail_terms`` and ``decay_tol`` from the configuration.

    Raises:
        InsufficientDecay: ‖S(k_max) − Û‖_F exceeds ``decay_tol``
        ValidationError: the k-grid is not uniform
    """
    numeric, tail = _continuous_pieces(sd, tgrid, **kwargs)
    return numeric + tail.transform(tgrid)


def bound_part(sd: ScatteringData, t) -> np.ndarray:
    """Σ_l C_l² e^{−κ_l t}."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((t.size, sd.n, sd.n), dtype=complex)
    for bs in sd.bound_states:
        c2 = bs.C @ bs.C
        out += np.exp(-bs.kappa * t)[:, None, None] * c2
    return out


def bound_part_derivative(sd: ScatteringData, t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((t.size, sd.n, sd.n), dtype=complex)
    for bs in sd.bound_states:
        out -= (bs.kappa * np.exp(-bs.kappa * t))[:, None, None] * (bs.C @ bs.C)
    return out


def hermitian_asymmetry(g: np.ndarray) -> float:
    """max_t ‖G(t) − G(t)†‖_F."""
    return float(np.max(frobenius(g - dagger(g)), initial=0.0))


def _symmetrize(g: np.ndarray) -> tuple[np.ndarray, float]:
    asym = hermitian_asymmetry(g)
    if asym > inverse_config.HERMITIAN_WARN_TOL:
        logger.warning(f"✗ G(t) hermitian asymmetry {asym:.3e} before symmetrisation")
    else:
        logger.debug(f"G(t) hermitian asymmetry {asym:.2e}")
    return 0.5 * (g + dagger(g)), asym


def kernel_G(sd: ScatteringData, tgrid, **kwargs) -> np.ndarray:
    """
    G(t) on ``tgrid``, hermitian-symmetrised.

    Keyword arguments are passed to :func:`continuous_part`.

    Raises:
        InsufficientDecay: S has not approached Û at k_max
    """
    g = bound_part(sd, tgrid) + continuous_part(sd, tgrid, **kwargs)
    g, _ = _symmetrize(g)
    return g


@dataclass(frozen=True, eq=False)
class SampledKernel:
    """
    G(t) as a callable: exact bound-state sum and boundary tail plus a cubic
    spline of the numerical remainder on ``tgrid``.
    """

    data: ScatteringData
    tgrid: np.ndarray
    continuous: CubicSpline
    tail: BoundaryTail
    asymmetry: float

    @property
    def n(self) -> int:
        return self.data.n

    @property
    def t_max(self) -> float:
        return float(self.tgrid[-1])

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        g = bound_part(self.data, flat) + self.tail.transform(flat) + self.continuous(flat)
        return g.reshape(*t.shape, self.n, self.n)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        g = (
            bound_part_derivative(self.data, flat)
            + self.tail.transform_derivative(flat)
            + self.continuous(flat, 1)
        )
        return g.reshape(*t.shape, self.n, self.n)

    def samples(self) -> np.ndarray:
        return self(self.tgrid)


def sample_kernel(
    sd: ScatteringData, t_max: float, *, samples_per_unit: Optional[int] = None, **kwargs
) -> SampledKernel:
    """Tabulate G on [0, t_max] and wrap it as a :class:`SampledKernel`."""
    samples_per_unit = inverse_config.G_SAMPLES_PER_UNIT if samples_per_unit is None else samples_per_unit
    count = int(np.ceil(t_max * samples_per_unit)) + 1
    tgrid = np.linspace(0.0, t_max, count)
    numeric, tail = _continuous_pieces(sd, tgrid, **kwargs)
    # Û commutes with E, so the tail transform is hermitian
    numeric, asym = _symmetrize(numeric)
    spline = CubicSpline(tgrid, numeric, axis=0)
    logger.info(f"✓ G(t) tabulated on [0, {t_max:.4g}] with {count} samples")
    return SampledKernel(data=sd, tgrid=tgrid, continuous=spline, tail=tail, asymmetry=asym)
