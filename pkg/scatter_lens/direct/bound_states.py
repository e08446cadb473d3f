"""
Bound states and normalisation matrices.

Bound states sit at k = iκ where M₋(iκ) is singular. On the imaginary axis

    M₋(iκ)* = −(1/2κ)·[(i/2)(U† − I)F(0,iκ) + (1/2)(U† + I)F_x(0,iκ)]

so the search tracks the smallest singular value of the boundary operator
applied to the Jost functions, and the kernel projector P comes from the
same matrix.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from pydantic import BaseModel
from scipy.optimize import minimize_scalar

from scatter_lens.config import direct_config
from scatter_lens.exceptions import IndefiniteB, NotARoot, RangeTooCoarse, ValidationError
from scatter_lens.spectral.boundary import BoundaryCondition, boundary_operator, robin_parameters
from scatter_lens.spectral.potential import PotentialSpec
from scatter_lens.utils.linalg import (
    composite_gauss_legendre,
    dagger,
    hermitian_part,
    inverse_sqrt_hpd,
    null_projector,
)
from scatter_lens.utils.logger import get_logger

from .integrator import jost_functions, jost_functions_batch, jost_solution

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class BoundState:
    """Discrete eigenvalue −κ² with its kernel projector and normalisation."""

    kappa: float
    P: np.ndarray
    multiplicity: int
    A_l: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None

    @property
    def energy(self) -> float:
        return -self.kappa**2


def _boundary_matrix(p: PotentialSpec, bc: BoundaryCondition, kappa: float) -> tuple[np.ndarray, float]:
    """Boundary operator at iκ and the scale ‖[F; F_x]‖₂ used to normalise it."""
    f0, fx0 = jost_functions(p, 1j * kappa)
    scale = float(np.linalg.norm(np.vstack([f0, fx0]), 2))
    return boundary_operator(f0, fx0, bc), scale


def _sigma_min(p: PotentialSpec, bc: BoundaryCondition, kappa: float) -> float:
    m, scale = _boundary_matrix(p, bc, kappa)
    return float(np.linalg.svd(m, compute_uv=False)[-1]) / scale


def _sigma_min_scan(p: PotentialSpec, bc: BoundaryCondition, kappas: np.ndarray) -> np.ndarray:
    f0, fx0 = jost_functions_batch(p, 1j * kappas)
    sigma = np.empty(kappas.size)
    for i in range(kappas.size):
        scale = float(np.linalg.norm(np.vstack([f0[i], fx0[i]]), 2))
        m = boundary_operator(f0[i], fx0[i], bc)
        sigma[i] = float(np.linalg.svd(m, compute_uv=False)[-1]) / scale
    return sigma



def default_kappa_range(p: PotentialSpec, bc: BoundaryCondition) -> tuple[float, float]:
    """[κ_min, √max|Q| + max(0, max tan(θ/2)) + 1].

    The tan term bounds the bound states created by an attractive Robin
    condition f_x(0) = h f(0), h = −tan(θ/2) < 0.
    """
    slopes = robin_parameters(bc)
    robin = max(0.0, float(np.max(-slopes, initial=0.0)))
    upper = np.sqrt(p.max_norm()) + robin + 1.0
    return direct_config.KAPPA_MIN, float(upper)


def _refine(p, bc, a: float, b: float, xatol: float) -> tuple[float, float]:
    res = minimize_scalar(
        lambda kap: _sigma_min(p, bc, kap),
        bounds=(a, b),
        method="bounded",
        options={"xatol": xatol, "maxiter": 500},
    )
    return float(res.x), float(res.fun)


def find_bound_states(
    p: PotentialSpec,
    bc: BoundaryCondition,
    kappa_range: Optional[tuple[float, float]] = None,
    *,
    scan_points: Optional[int] = None,
) -> list[BoundState]:
    """
    All κ in ``kappa_range`` with M₋(iκ) singular, in increasing order.

    The smallest normalised singular value is scanned on a log-spaced grid;
    every local dip is refined by bounded minimisation and accepted when the
    refined value falls below SCATTER_ROOT_RESIDUAL_TOL. P is the projector
    onto the numerical kernel at rank tolerance SCATTER_RANK_TOL.

    Raises:
        ValidationError: κ_min ≤ 0 or an empty range
        RangeTooCoarse: a second root was found inside the bracket of the first
    """
    lo, hi = kappa_range if kappa_range is not None else default_kappa_range(p, bc)
    if lo <= 0.0 or hi <= lo:
        raise ValidationError(f"invalid κ range [{lo}, {hi}]")
    scan_points = direct_config.KAPPA_SCAN_POINTS if scan_points is None else scan_points
    root_tol = direct_config.ROOT_TOL
    residual_tol = direct_config.ROOT_RESIDUAL_TOL

    grid = np.geomspace(lo, hi, scan_points)
    sigma = _sigma_min_scan(p, bc, grid)

    dips = [
        i
        for i in range(scan_points)
        if (i == 0 or sigma[i] <= sigma[i - 1]) and (i == scan_points - 1 or sigma[i] <= sigma[i + 1])
    ]

    roots: list[float] = []
    for i in dips:
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, scan_points - 1)]
        kappa, value = _refine(p, bc, a, b, root_tol)
        if value > residual_tol:
            continue
        if any(abs(kappa - r) <= 1e-8 * max(1.0, kappa) for r in roots):
            continue

        width = b - a
        gap = 0.01 * width
        for sub in ((a, kappa - gap), (kappa + gap, b)):
            if sub[1] - sub[0] <= root_tol:
                continue
            other, other_value = _refine(p, bc, sub[0], sub[1], root_tol)
            if other_value <= residual_tol and abs(other - kappa) > 0.05 * width:
                raise RangeTooCoarse(
                    f"two roots κ ≈ {kappa:.6g} and κ ≈ {other:.6g} share one scan cell; "
                    f"increase the number of scan points"
                )
        roots.append(kappa)

    states = []
    for kappa in sorted(roots):
        m, _ = _boundary_matrix(p, bc, kappa)
        projector, dim, s = null_projector(m, direct_config.RANK_TOL)
        if dim == 0:
            # Refinement stopped short of the rank tolerance: keep the weakest direction
            v = np.linalg.svd(m)[2][-1].conj()[:, None]
            projector, dim = v @ dagger(v), 1
            logger.warning(f"κ = {kappa:.10g}: σ_min/σ_max = {s[-1] / s[0]:.2e} above rank tolerance")
        states.append(BoundState(kappa=kappa, P=hermitian_part(projector), multiplicity=dim))
        logger.debug(f"bound state κ = {kappa:.12g}, multiplicity {dim}")

    logger.info(f"✓ found {len(states)} bound state(s) in κ ∈ [{lo:.3g}, {hi:.3g}]")
    return states


def normalization_matrices(
    p: PotentialSpec,
    bc: BoundaryCondition,
    bs: BoundState,
    *,
    panels: Optional[int] = None,
    order: Optional[int] = None,
) -> BoundState:
    """
    Fill A_l = ∫₀^∞ F(t,iκ)*F(t,iκ)dt and C = P·B^{−1/2}, B = PAP + (I − P).

    The quadrature is composite Gauss–Legendre on [0, T], T = support + 10/κ,
    with panel edges at the breakpoints of Q;
    beyond the support F = e^{−κt}I, so the tail adds e^{−2κT}/(2κ)·I exactly.

    Raises:
        NotARoot: κ is not a zero of det M₋(iκ)
        IndefiniteB: the assembled B is not positive definite
    """
    kappa = bs.kappa
    residual = _sigma_min(p, bc, kappa)
    if residual > direct_config.ROOT_RESIDUAL_TOL:
        raise NotARoot(f"κ = {kappa:.10g} has boundary residual {residual:.3e}")

    panels = direct_config.NORMALIZATION_PANELS if panels is None else panels
    order = direct_config.NORMALIZATION_ORDER if order is None else order
    support = 0.0 if p.is_zero else p.support_bound
    t_end = support + 10.0 / kappa
    edges = [0.0, *p.breakpoints, t_end]
    pieces = [
        composite_gauss_legendre(a, b, max(1, round(panels * (b - a) / t_end)), order)
        for a, b in zip(edges[:-1], edges[1:])
    ]
    nodes = np.concatenate([nd for nd, _ in pieces])
    weights = np.concatenate([w for _, w in pieces])

    f = jost_solution(p, 1j * kappa, nodes).F[1:]
    a_l = np.einsum("j,jba,jbc->ac", weights, f.conj(), f)
    a_l = hermitian_part(a_l + np.exp(-2.0 * kappa * t_end) / (2.0 * kappa) * np.eye(p.n))

    P = bs.P
    complement = np.eye(p.n) - P
    b_l = hermitian_part(P @ a_l @ P + complement)
    try:
        inv_sqrt = inverse_sqrt_hpd(b_l)
    except np.linalg.LinAlgError as exc:
        raise IndefiniteB(f"B at κ = {kappa:.6g} is not positive definite: {exc}") from exc

    c = hermitian_part(P @ inv_sqrt)
    logger.debug(f"κ = {kappa:.10g}: trace C² = {np.trace(c @ c).real:.6g}")
    return replace(bs, A_l=a_l, C=c)


class VirtualLevelReport(BaseModel):
    """Zero-energy screening at k = iε."""

    epsilon: float
    sigma_min: float
    threshold: float
    flagged: bool
    message: str = ""


def check_no_virtual_levels(
    p: PotentialSpec,
    bc: BoundaryCondition,
    *,
    epsilon: Optional[float] = None,
    ratio: Optional[float] = None,
) -> VirtualLevelReport:
    """
    Flag a suspected virtual level or threshold resonance.

    The normalised smallest singular value of the boundary operator at k = iε
    is compared with ratio·ε; near a zero-energy state it is O(ε).
    """
    epsilon = direct_config.VIRTUAL_LEVEL_EPS if epsilon is None else epsilon
    ratio = direct_config.VIRTUAL_LEVEL_RATIO if ratio is None else ratio
    sigma = _sigma_min(p, bc, epsilon)
    threshold = ratio * epsilon
    flagged = sigma < threshold
    message = ""
    if flagged:
        message = f"σ_min = {sigma:.3e} at k = i·{epsilon:g} suggests a zero-energy resonance"
        logger.warning(f"✗ {message}")
    else:
        logger.debug(f"✓ no virtual level (σ_min = {sigma:.3e} at k = i·{epsilon:g})")
    return VirtualLevelReport(
        epsilon=epsilon, sigma_min=sigma, threshold=threshold, flagged=flagged, message=message
    )


class PoleProfile(BaseModel):
    """‖(k − iκ)M₋⁻¹(k)‖ and ‖(k − iκ)²M₋⁻¹(k)‖ at k = i(κ ± δ)."""

    kappa: float
    deltas: list[float]
    first_order: list[float]
    second_order: list[float]
    bounded: bool
    vanishing: bool


def _minus_inverse_norm(p: PotentialSpec, bc: BoundaryCondition, kappa: float) -> float:
    f0, fx0 = jost_functions(p, 1j * kappa)
    m_minus = (dagger(f0) @ bc.B - dagger(fx0) @ bc.A) / (2.0 * kappa)
    return float(np.linalg.norm(np.linalg.inv(m_minus), 2))


def simple_pole_profile(
    p: PotentialSpec,
    bc: BoundaryCondition,
    kappa: float,
    deltas=(1e-3, 1e-4, 1e-5),
) -> PoleProfile:
    """Check that M₋⁻¹ has a simple pole at iκ.

    For each δ both sides κ ± δ are sampled and the larger norm kept. The
    first-order product must stay within a factor 2 across δ-decades and the
    second-order product must shrink in proportion to δ.
    """
    deltas = sorted((float(d) for d in deltas), reverse=True)
    first, second = [], []
    for d in deltas:
        norm = max(_minus_inverse_norm(p, bc, kappa + s * d) for s in (-1.0, 1.0) if kappa + s * d > 0.0)
        first.append(d * norm)
        second.append(d * d * norm)

    ratios = [a / b for a, b in zip(first[:-1], first[1:])]
    bounded = all(0.5 <= r <= 2.0 for r in ratios)
    shrink = [(s / d) / (s0 / d0) for s, d, s0, d0 in zip(second[1:], deltas[1:], second, deltas)]
    vanishing = all(0.5 <= r <= 2.0 for r in shrink)
    return PoleProfile(
        kappa=kappa,
        deltas=deltas,
        first_order=first,
        second_order=second,
        bounded=bounded,
        vanishing=vanishing,
    )
