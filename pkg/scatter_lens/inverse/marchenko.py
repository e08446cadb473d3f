"""
Nyström solution of the Marchenko equation

    G(x+y) + K(x,y) + ∫ₓ^T K(x,t)G(t+y)dt = 0,    x ≤ y ≤ T.

For each x the unknown row block [K(x,t_1) … K(x,t_m)] satisfies
X(I + 𝒢) = −g with 𝒢_{ji} = w_j G(t_j + t_i) and g_i = G(x + t_i). The nodes
are composite Gauss–Legendre: one partial panel [x, e] followed by the fixed
panels of [0, T] that lie above x, so the fixed-fixed block of 𝒢 is shared
by every x.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from scatter_lens.config import inverse_config
from scatter_lens.exceptions import IllConditioned, ValidationError
from scatter_lens.utils.linalg import composite_gauss_legendre, frobenius
from scatter_lens.utils.logger import get_logger

from .kernel import SampledKernel

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class MarchenkoRow:
    """K(x,·) at the quadrature nodes of [x, T]."""

    x: float
    nodes: np.ndarray
    weights: np.ndarray
    K: np.ndarray
    K_diag: np.ndarray
    residual: float
    rcond: float
    K_x: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class MarchenkoKernel:
    """K(x,y) for every x of ``xgrid`` together with the G it was solved from."""

    G: SampledKernel
    xgrid: np.ndarray
    T: float
    rows: list[MarchenkoRow] = field(repr=False)

    @property
    def tgrid(self) -> np.ndarray:
        return self.G.tgrid

    @property
    def K_diag(self) -> np.ndarray:
        """K(x,x) on xgrid, shape (len(xgrid), n, n)."""
        return np.stack([r.K_diag for r in self.rows])

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r.residual for r in self.rows])

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals, initial=0.0))

    @property
    def min_rcond(self) -> float:
        return float(min(r.rcond for r in self.rows))

    def evaluate(self, i: int, y) -> np.ndarray:
        """K(x_i, y) for y in [x_i, T] through the Nyström interpolant."""
        row = self.rows[i]
        return nystrom_interpolate(self.G, row, y)


def nystrom_interpolate(G: SampledKernel, row: MarchenkoRow, y) -> np.ndarray:
    """K(x,y) = −G(x+y) − Σ_j w_j K(x,t_j) G(t_j + y)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    g_pairs = G(row.nodes[:, None] + y[None, :])
    return -G(row.x + y) - np.einsum("j,jab,jibc->iac", row.weights, row.K, g_pairs)


class MarchenkoSolver:
    """Nyström operator for one sampled G and one truncation length T."""

    def __init__(
        self,
        G: SampledKernel,
        T: float,
        *,
        panel_length: Optional[float] = None,
        order: Optional[int] = None,
        condition_limit: Optional[float] = None,
    ):
        cfg = inverse_config
        self.G = G
        self.T = float(T)
        self.order = cfg.PANEL_ORDER if order is None else order
        panel_length = cfg.PANEL_LENGTH if panel_length is None else panel_length
        self.condition_limit = cfg.CONDITION_LIMIT if condition_limit is None else condition_limit
        if 2.0 * self.T > G.t_max * (1.0 + 1e-12):
            raise ValidationError(f"G is tabulated up to {G.t_max:.4g} but 2T = {2 * self.T:.4g}")

        self.panels = max(int(np.ceil(self.T / panel_length)), 1)
        self.edges = np.linspace(0.0, self.T, self.panels + 1)
        self.fixed_nodes, self.fixed_weights = composite_gauss_legendre(
            0.0, self.T, self.panels, self.order
        )
        # G(t_j + t_i) for all fixed node pairs, shape (m, m, n, n)
        self.fixed_block = G(self.fixed_nodes[:, None] + self.fixed_nodes[None, :])

    def _nodes(self, x: float) -> tuple[np.ndarray, np.ndarray, slice, int]:
        """Nodes on [x, T]: partial-panel nodes first, then the fixed ones above x."""
        tiny = 1e-12 * max(1.0, self.T)
        p0 = min(int(np.searchsorted(self.edges, x - tiny, side="left")), self.panels)
        edge = self.edges[p0]
        if edge - x > tiny:
            partial_n, partial_w = composite_gauss_legendre(x, edge, 1, self.order)
        else:
            partial_n, partial_w = np.empty(0), np.empty(0)
        fixed = slice(p0 * self.order, self.panels * self.order)
        nodes = np.concatenate([partial_n, self.fixed_nodes[fixed]])
        weights = np.concatenate([partial_w, self.fixed_weights[fixed]])
        return nodes, weights, fixed, partial_n.size

    def _pair_block(self, nodes, fixed: slice, n_partial: int) -> np.ndarray:
        """G(t_j + t_i) for the nodes of one x, shape (m, m, n, n)."""
        m, n = nodes.size, self.G.n
        block = np.empty((m, m, n, n), dtype=complex)
        block[n_partial:, n_partial:] = self.fixed_block[fixed, fixed]
        if n_partial:
            block[:n_partial, :] = self.G(nodes[:n_partial, None] + nodes[None, :])
            block[n_partial:, :n_partial] = self.G(nodes[n_partial:, None] + nodes[None, :n_partial])
        return block

    @staticmethod
    def _operator(block: np.ndarray, weights: np.ndarray) -> np.ndarray:
        """(I + 𝒢) with row block j, column block i equal to w_j G(t_j + t_i)."""
        m, _, n, _ = block.shape
        op = (weights[:, None, None, None] * block).transpose(0, 2, 1, 3).reshape(m * n, m * n)
        op[np.diag_indices(m * n)] += 1.0
        return op

    def _factor(self, op: np.ndarray, x: float):
        # X·op = −g  ⇔  opᵀ·Xᵀ = −gᵀ
        opt = op.T
        lu, piv = linalg.lu_factor(opt)
        (gecon,) = linalg.get_lapack_funcs(("gecon",), (lu,))
        rcond, _ = gecon(lu, np.linalg.norm(opt, 1), norm="1")
        rcond = float(rcond)
        if rcond <= 0.0 or 1.0 / rcond > self.condition_limit:
            cond = np.inf if rcond <= 0.0 else 1.0 / rcond
            raise IllConditioned(
                f"Marchenko operator at x = {x:.6g} has condition number ≈ {cond:.3e} "
                f"(limit {self.condition_limit:.1e})"
            )
        return (lu, piv), rcond

    @staticmethod
    def _stack(rows: np.ndarray) -> np.ndarray:
        """(m, n, n) row blocks → (n, m·n) matrix [R_1 … R_m]."""
        m, n, _ = rows.shape
        return rows.transpose(1, 0, 2).reshape(n, m * n)

    def _solve_rows(self, factor, rhs: np.ndarray) -> np.ndarray:
        m, n, _ = rhs.shape
        xt = linalg.lu_solve(factor, self._stack(rhs).T)
        return xt.T.reshape(n, m, n).transpose(1, 0, 2)

    def solve(self, x: float, *, with_derivative: bool = False) -> MarchenkoRow:
        """
        K(x,·) on [x, T]; with ``with_derivative`` also K_x(x,·) from

            K_x + ∫ₓ^T K_x(x,t)G(t+y)dt = −G'(x+y) + K(x,x)G(x+y).

        Raises:
            ValidationError: x outside [0, T)
            IllConditioned: condition number of I + 𝒢 exceeds the limit
        """
        x = float(x)
        if x < 0.0 or x >= self.T:
            raise ValidationError(f"x = {x} outside [0, T) with T = {self.T}")
        nodes, weights, fixed, n_partial = self._nodes(x)
        block = self._pair_block(nodes, fixed, n_partial)
        factor, rcond = self._factor(self._operator(block, weights), x)

        g = self.G(x + nodes)
        K = self._solve_rows(factor, -g)
        k_diag = -self.G(np.array([2.0 * x]))[0] - np.einsum("j,jab,jbc->ac", weights, K, g)

        # Collocated residual scaled by max‖G(x + t_i)‖
        lhs = g + K + np.einsum("j,jab,jibc->iac", weights, K, block)
        scale = float(np.max(frobenius(g), initial=0.0))
        residual = float(np.max(frobenius(lhs), initial=0.0)) / scale if scale > 0.0 else 0.0

        k_x = None
        if with_derivative:
            k_x = self._solve_rows(factor, -self.G.derivative(x + nodes) + k_diag @ g)

        logger.debug(f"x = {x:.5g}: {nodes.size} nodes, rcond {rcond:.2e}, residual {residual:.2e}")
        return MarchenkoRow(
            x=x,
            nodes=nodes,
            weights=weights,
            K=K,
            K_diag=k_diag,
            residual=residual,
            rcond=rcond,
            K_x=k_x,
        )


def marchenko_solve(G: SampledKernel, x: float, T: float, **kwargs) -> MarchenkoRow:
    """K(x,·) on [x, T] for a single x."""
    return MarchenkoSolver(G, T, **kwargs).solve(x)


def solve_marchenko_kernel(G: SampledKernel, xgrid, T: float, **kwargs) -> MarchenkoKernel:
    """
    K(x,·) for every x of ``xgrid``. The row at x = 0, when present, also
    carries K_x(0,·).

    Raises:
        IllConditioned: at the first x where the operator is ill-conditioned
    """
    xgrid = np.asarray(xgrid, dtype=float)
    solver = MarchenkoSolver(G, T, **kwargs)
    rows = [solver.solve(x, with_derivative=(x == 0.0)) for x in xgrid]
    mk = MarchenkoKernel(G=G, xgrid=xgrid, T=float(T), rows=rows)
    logger.info(
        f"✓ Marchenko solved at {xgrid.size} points (T = {T:.4g}, max residual {mk.max_residual:.2e})"
    )
    return mk
