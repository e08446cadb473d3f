"""Spectral and spatial sampling grids."""

from dataclasses import dataclass

import numpy as np

from scatter_lens.exceptions import ValidationError


@dataclass(frozen=True, eq=False)
class KGrid:
    """Strictly increasing positive wavenumbers; k = 0 is never sampled."""

    k_values: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k_values, dtype=float)
        if k.ndim != 1 or k.size < 2:
            raise ValidationError("a k-grid needs at least two points")
        if k[0] <= 0.0:
            raise ValidationError(f"k-grid must exclude k ≤ 0, first point is {k[0]}")
        if np.any(np.diff(k) <= 0.0):
            raise ValidationError("k-grid must be strictly increasing")
        k.setflags(write=False)
        object.__setattr__(self, "k_values", k)

    @property
    def k_max(self) -> float:
        return float(self.k_values[-1])

    @property
    def size(self) -> int:
        return int(self.k_values.size)

    @property
    def spacing(self) -> float:
        """Uniform spacing, or 0.0 when the grid is not uniform."""
        d = np.diff(self.k_values)
        return float(d[0]) if np.allclose(d, d[0], rtol=1e-9, atol=0.0) else 0.0

    @property
    def is_uniform(self) -> bool:
        return self.spacing > 0.0 and np.isclose(self.k_values[0], self.spacing, rtol=1e-9)


def uniform_kgrid(k_max: float, n_k: int) -> KGrid:
    """k_j = j·k_max/n_k for j = 1..n_k: uniform, symmetric-extendable, k = 0 excluded."""
    if k_max <= 0.0 or n_k < 2:
        raise ValidationError(f"invalid k-grid request k_max={k_max}, n_k={n_k}")
    return KGrid(np.arange(1, n_k + 1, dtype=float) * (k_max / n_k))


def uniform_xgrid(x_max: float, n_x: int) -> np.ndarray:
    """n_x uniformly spaced points on [0, x_max]."""
    if x_max <= 0.0 or n_x < 2:
        raise ValidationError(f"invalid x-grid request x_max={x_max}, n_x={n_x}")
    return np.linspace(0.0, x_max, n_x)
