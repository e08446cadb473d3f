"""
Hermitian matrix potentials Q(x) on the half-line.

A PotentialSpec is either an analytic preset or a sampled grid. Sampled
potentials are interpolated piecewise-linearly and vanish beyond
``support_bound``. The presets are the ones the solvers are tested against:

- zero
- square_well / diagonal_wells: Q_jj(x) = depth_j for 0 ≤ x ≤ width_j
- smooth_bump: Q(x) = H sin²(πx/w) on [0, w] with a hermitian amplitude H
- reflectionless: the scalar one-bound-state potential with G(t) = γe^{−κt}
"""

from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel
from scipy.integrate import trapezoid

from scatter_lens.config import spectral_config
from scatter_lens.exceptions import ShapeMismatch, ValidationError
from scatter_lens.utils.linalg import hermitian_defect
from scatter_lens.utils.logger import get_logger

logger = get_logger(__name__)

PotentialForm = Literal[
    "zero", "square_well", "diagonal_wells", "smooth_bump", "reflectionless", "sampled"
]

# Below this magnitude the reflectionless tail is treated as zero.
_TAIL_CUTOFF = 1e-16


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """Matrix potential with a support bound beyond which Q ≡ 0."""

    n: int
    form: PotentialForm
    support_bound: float
    depths: Optional[np.ndarray] = field(default=None, repr=False)
    widths: Optional[np.ndarray] = field(default=None, repr=False)
    amplitude: Optional[np.ndarray] = field(default=None, repr=False)
    kappa: Optional[float] = None
    gamma: Optional[float] = None
    grid: Optional[np.ndarray] = field(default=None, repr=False)
    values: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def is_zero(self) -> bool:
        return self.form == "zero" or self.support_bound <= 0.0

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points in (0, support_bound] where Q may jump."""
        if self.is_zero:
            return ()
        points = {float(self.support_bound)}
        if self.form in ("square_well", "diagonal_wells"):
            points.update(float(w) for w in self.widths)
        elif self.form == "sampled" and self.grid[0] > 0.0:
            points.add(float(self.grid[0]))
        return tuple(sorted(p for p in points if 0.0 < p <= self.support_bound))

    def __call__(self, x: float) -> np.ndarray:
        return self.evaluate(np.atleast_1d(float(x)))[0]

    def evaluate(self, xs) -> np.ndarray:
        """Q at each point of ``xs`` as an array of shape (len(xs), n, n)."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.zeros((xs.size, self.n, self.n), dtype=complex)
        if self.is_zero:
            return out
        inside = (xs >= 0.0) & (xs <= self.support_bound)
        if not np.any(inside):
            return out
        xi = xs[inside]

        if self.form in ("square_well", "diagonal_wells"):
            idx = np.arange(self.n)
            out_in = np.zeros((xi.size, self.n, self.n), dtype=complex)
            out_in[:, idx, idx] = np.where(
                xi[:, None] <= self.widths[None, :], self.depths[None, :], 0.0
            )
        elif self.form == "smooth_bump":
            width = float(self.widths[0])
            profile = np.sin(np.pi * xi / width) ** 2
            out_in = profile[:, None, None] * self.amplitude[None, :, :]
        elif self.form == "reflectionless":
            u = self.gamma * np.exp(-2.0 * self.kappa * xi)
            q = -4.0 * self.kappa * u / (1.0 + u / (2.0 * self.kappa)) ** 2
            out_in = q.astype(complex)[:, None, None]
        elif self.form == "sampled":
            out_in = self._interpolate(xi)
        else:
            raise ValidationError(f"unknown potential form '{self.form}'")

        out[inside] = out_in
        return out

    def _interpolate(self, xi: np.ndarray) -> np.ndarray:
        grid, values = self.grid, self.values
        x = np.clip(xi, grid[0], grid[-1])
        j = np.clip(np.searchsorted(grid, x, side="right") - 1, 0, grid.size - 2)
        theta = (x - grid[j]) / (grid[j + 1] - grid[j])
        out = (1.0 - theta)[:, None, None] * values[j] + theta[:, None, None] * values[j + 1]
        # Zero beyond the sampled range
        out[xi > grid[-1]] = 0.0
        return out

    def max_norm(self, points: Optional[int] = None) -> float:
        """max_x |Q(x)| with |·| the largest eigenvalue modulus."""
        if self.is_zero:
            return 0.0
        xs = validation_grid(self, points)
        q = self.evaluate(xs)
        q = 0.5 * (q + np.conj(np.swapaxes(q, -1, -2)))
        return float(np.max(np.abs(np.linalg.eigvalsh(q))))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def zero_potential(n: int = 1) -> PotentialSpec:
    return PotentialSpec(n=n, form="zero", support_bound=0.0)


def square_well(depth: float, width: float, n: int = 1) -> PotentialSpec:
    """Q(x) = depth·I on [0, width]; depth < 0 is attractive."""
    if width <= 0.0:
        raise ValidationError(f"well width must be positive, got {width}")
    return PotentialSpec(
        n=n,
        form="square_well",
        support_bound=float(width),
        depths=_frozen(np.full(n, float(depth))),
        widths=_frozen(np.full(n, float(width))),
    )


def diagonal_wells(depths, widths) -> PotentialSpec:
    """Independent square wells, one per channel (a star graph with n edges)."""
    depths = np.atleast_1d(np.asarray(depths, dtype=float))
    widths = np.broadcast_to(np.asarray(widths, dtype=float), depths.shape).copy()
    if np.any(widths <= 0.0):
        raise ValidationError("well widths must be positive")
    return PotentialSpec(
        n=depths.size,
        form="diagonal_wells",
        support_bound=float(widths.max()),
        depths=_frozen(depths.copy()),
        widths=_frozen(widths),
    )


def smooth_bump(amplitude, width: float) -> PotentialSpec:
    """Q(x) = H sin²(πx/width) on [0, width], zero beyond."""
    h = np.atleast_2d(np.asarray(amplitude, dtype=complex))
    if h.shape[0] != h.shape[1]:
        raise ShapeMismatch(f"bump amplitude must be square, got {h.shape}")
    if width <= 0.0:
        raise ValidationError(f"bump width must be positive, got {width}")
    return PotentialSpec(
        n=h.shape[0],
        form="smooth_bump",
        support_bound=float(width),
        amplitude=_frozen(h.copy()),
        widths=_frozen(np.array([float(width)])),
    )


def reflectionless(kappa: float, gamma: float) -> PotentialSpec:
    """Scalar potential reconstructed from G(t) = γe^{−κt}.

    With u = γe^{−2κx}, Q(x) = −4κu / (1 + u/(2κ))².
    """
    if kappa <= 0.0 or gamma <= 0.0:
        raise ValidationError("reflectionless data needs κ > 0 and γ > 0")
    support = np.log(max(4.0 * kappa * gamma / _TAIL_CUTOFF, 1.0)) / (2.0 * kappa)
    return PotentialSpec(
        n=1, form="reflectionless", support_bound=float(support), kappa=float(kappa), gamma=float(gamma)
    )


def sampled_potential(grid, values, support_bound: Optional[float] = None) -> PotentialSpec:
    """Potential given on an ascending grid, linear between nodes.

    Raises:
        ShapeMismatch: values do not have shape (len(grid), n, n)
        ValidationError: grid is not strictly ascending
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=complex)
    if values.ndim == 1:
        values = values[:, None, None]
    if grid.ndim != 1 or grid.size < 2:
        raise ShapeMismatch("sampled potential needs at least two grid points")
    if values.ndim != 3 or values.shape[0] != grid.size or values.shape[1] != values.shape[2]:
        raise ShapeMismatch(f"values shape {values.shape} does not match grid of {grid.size} points")
    if np.any(np.diff(grid) <= 0.0):
        raise ValidationError("potential grid must be strictly ascending")
    support = float(grid[-1]) if support_bound is None else float(support_bound)
    return PotentialSpec(
        n=values.shape[1],
        form="sampled",
        support_bound=support,
        grid=_frozen(grid.copy()),
        values=_frozen(values.copy()),
    )


def validation_grid(p: PotentialSpec, points: Optional[int] = None) -> np.ndarray:
    """Evaluation points for diagnostics: sampled nodes, or a grid refined per segment."""
    points = spectral_config.VALIDATION_POINTS if points is None else points
    if p.is_zero:
        return np.array([0.0])
    if p.form == "sampled":
        return p.grid[p.grid <= p.support_bound]
    return np.concatenate([xs for xs, _ in _segments(p, points)])


def _segments(p: PotentialSpec, points: int):
    """(nodes, values) per smooth segment, endpoint values taken from inside."""
    edges = (0.0, *p.breakpoints)
    total = edges[-1]
    for a, b in zip(edges[:-1], edges[1:]):
        m = max(int(points * (b - a) / total), 8)
        xs = np.linspace(a, b, m)
        inner = xs.copy()
        inner[0] = np.nextafter(a, b)
        inner[-1] = np.nextafter(b, a)
        yield xs, p.evaluate(inner)


class PotentialReport(BaseModel):
    """Outcome of validate_potential."""

    form: str
    n: int
    hermiticity_residual: float
    weighted_integral: float
    support_bound: float
    support_consistent: bool
    passed: bool
    messages: list[str] = []


def validate_potential(p: PotentialSpec, tol: Optional[float] = None) -> PotentialReport:
    """
    Check hermiticity, the (1+t)-weighted integrability bound and the support bound.

    The integral ∫(1+t)|Q(t)|dt is estimated by the trapezoid rule with |·| the
    largest eigenvalue modulus. Failures are reported, never raised.
    """
    tol = spectral_config.HERMITIAN_TOL if tol is None else tol
    messages: list[str] = []

    if p.is_zero:
        return PotentialReport(
            form=p.form,
            n=p.n,
            hermiticity_residual=0.0,
            weighted_integral=0.0,
            support_bound=p.support_bound,
            support_consistent=True,
            passed=True,
        )

    if p.form == "sampled":
        keep = p.grid <= p.support_bound
        segments = [(p.grid[keep], p.values[keep])] if np.count_nonzero(keep) >= 2 else []
        beyond = p.values[~keep]
        leftover = float(np.max(np.abs(beyond), initial=0.0))
        support_ok = np.isfinite(p.support_bound) and p.support_bound > 0.0 and leftover <= tol
        if leftover > tol:
            messages.append(f"samples beyond support_bound are nonzero (max {leftover:.3e})")
        all_values = p.values
    else:
        segments = list(_segments(p, spectral_config.VALIDATION_POINTS))
        support_ok = bool(np.isfinite(p.support_bound) and p.support_bound > 0.0)
        all_values = np.concatenate([v for _, v in segments])

    herm = float(np.max(hermitian_defect(all_values)))
    if herm > tol:
        messages.append(f"Q is not hermitian (max ‖Q − Q†‖_F = {herm:.3e})")

    integral = 0.0
    for xs, vals in segments:
        sym = 0.5 * (vals + np.conj(np.swapaxes(vals, -1, -2)))
        norms = np.max(np.abs(np.linalg.eigvalsh(sym)), axis=-1)
        integral += float(trapezoid((1.0 + xs) * norms, xs))
    finite = np.isfinite(integral) and integral < spectral_config.INTEGRABILITY_LIMIT
    if not finite:
        messages.append(f"weighted integral {integral:.3e} is not finite within limits")
    if not support_ok:
        messages.append("support bound is inconsistent with the potential")

    passed = herm <= tol and finite and support_ok
    if passed:
        logger.debug(f"✓ potential '{p.form}' validated: ∫(1+t)|Q| = {integral:.6g}")
    else:
        logger.warning(f"✗ potential '{p.form}' failed validation: {'; '.join(messages)}")
    return PotentialReport(
        form=p.form,
        n=p.n,
        hermiticity_residual=herm,
        weighted_integral=integral,
        support_bound=p.support_bound,
        support_consistent=bool(support_ok),
        passed=bool(passed),
        messages=messages,
    )
