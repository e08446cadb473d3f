"""
ODE integration of −Y'' + QY = k²Y for matrix solutions.

Jost solutions are integrated backward from x_start = support_bound + margin,
where F(x,k) = e^{ikx}I holds exactly. The integrated quantity is the scaled
Y = F·e^{−ikx}, which satisfies Y'' = QY − 2ikY' with Y = I, Y' = 0 at
x_start; this keeps magnitudes O(1) on the imaginary axis where F itself
decays like e^{−κx}.

Standard solutions Θ, Φ are integrated forward from the origin and continued
exactly through the free region beyond the support.

Integration is split at the breakpoints of Q so the adaptive stepper never
steps across a jump.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from scatter_lens.config import direct_config
from scatter_lens.exceptions import IntegrationFailure, UnsupportedK, ValidationError
from scatter_lens.spectral.potential import PotentialSpec
from scatter_lens.utils.logger import get_logger

logger = get_logger(__name__)

# solve_ivp clamps rtol to 100·eps
_RTOL_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class JostSolution:
    """Samples of F(x,k) and F_x(x,k), shape (len(x), n, n)."""

    k: complex
    x: np.ndarray
    F: np.ndarray
    Fx: np.ndarray


@dataclass(frozen=True, eq=False)
class StandardSolutions:
    """Samples of Θ, Θ_x, Φ, Φ_x, each of shape (len(x), n, n)."""

    k: complex
    x: np.ndarray
    Theta: np.ndarray
    Theta_x: np.ndarray
    Phi: np.ndarray
    Phi_x: np.ndarray


def _q_on_segment(p: PotentialSpec, lo: float, hi: float) -> Callable[[float], np.ndarray]:
    """Q restricted to the open segment (lo, hi); constant segments are cached."""
    inner_lo = np.nextafter(lo, hi)
    inner_hi = np.nextafter(hi, lo)
    if p.form in ("zero", "square_well", "diagonal_wells"):
        q = p.evaluate([0.5 * (lo + hi)])[0]
        return lambda x: q
    return lambda x: p.evaluate([min(max(x, inner_lo), inner_hi)])[0]


def _run_segments(
    p: PotentialSpec,
    edges: list[float],
    make_rhs: Callable[[Callable[[float], np.ndarray]], Callable],
    z0: np.ndarray,
    x_eval: np.ndarray,
    rtol: float,
    atol: float,
    method: str,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate through consecutive segments; returns (final state, states at x_eval)."""
    states = np.zeros((x_eval.size, z0.size), dtype=complex)
    z = z0
    forward = edges[-1] > edges[0]
    last = len(edges) - 2
    for i, (start, stop) in enumerate(zip(edges[:-1], edges[1:])):
        lo, hi = min(start, stop), max(start, stop)
        if forward:
            sel = (x_eval >= lo) & ((x_eval < hi) | (i == last) & (x_eval <= hi))
        else:
            sel = (x_eval <= hi) & ((x_eval > lo) | (i == last) & (x_eval >= lo))
        idx = np.flatnonzero(sel)
        # t_eval must be strictly monotone in the direction of integration
        points, inverse = np.unique(x_eval[idx], return_inverse=True)
        if not forward:
            points = points[::-1]
            inverse = points.size - 1 - inverse
        t_eval = points if points.size and points[-1] == stop else np.append(points, stop)

        rhs = make_rhs(_q_on_segment(p, lo, hi))
        sol = solve_ivp(rhs, (start, stop), z, method=method, t_eval=t_eval, rtol=rtol, atol=atol)
        if sol.status != 0:
            raise IntegrationFailure(f"integration on [{lo:.6g}, {hi:.6g}] failed: {sol.message}")
        if idx.size:
            states[idx] = sol.y.T[inverse]
        z = sol.y[:, -1]
    return z, states


def _check_k(k: complex) -> complex:
    k = complex(k)
    if k.imag < -1e-14 * max(1.0, abs(k)):
        raise UnsupportedK(
            f"Jost solutions are computed for Im k ≥ 0 only (got k = {k}); use F(x, −k) on the real axis"
        )
    return k


def _check_x(x_eval) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x_eval, dtype=float)) if x_eval is not None else np.empty(0)
    if x.size and np.min(x) < 0.0:
        raise ValidationError("evaluation points must lie on the half-line x ≥ 0")
    return x


def jost_solution(
    p: PotentialSpec,
    k: complex,
    x_eval=None,
    *,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    margin: Optional[float] = None,
) -> JostSolution:
    """
    Jost solution F(x,k) and F_x(x,k) at the requested points, plus x = 0.

    The returned samples always start with x = 0 (the Jost functions); the
    remaining rows follow ``x_eval`` in the given order.

    Raises:
        UnsupportedK: Im k < 0
        IntegrationFailure: the stepper failed (step-size underflow)
    """
    k = _check_k(k)
    x_req = _check_x(x_eval)
    rtol = direct_config.ODE_RTOL if rtol is None else rtol
    atol = direct_config.ODE_ATOL if atol is None else atol
    margin = direct_config.FREE_MARGIN if margin is None else margin

    n = p.n
    eye = np.eye(n, dtype=complex)
    xs = np.concatenate([[0.0], x_req])
    phase = np.exp(1j * k * xs)[:, None, None]

    if p.is_zero:
        F = phase * eye
        return JostSolution(k=k, x=xs, F=F, Fx=1j * k * F)

    x_start = p.support_bound + margin
    edges = [x_start, *sorted((b for b in p.breakpoints if b < x_start), reverse=True), 0.0]
    nn = n * n
    two_ik = 2j * k

    def make_rhs(q_at):
        def rhs(x, z):
            y = z[:nn].reshape(n, n)
            yp = z[nn:].reshape(n, n)
            return np.concatenate([yp.ravel(), (q_at(x) @ y - two_ik * yp).ravel()])

        return rhs

    z0 = np.concatenate([eye.ravel(), np.zeros(nn, dtype=complex)])
    inside = xs <= x_start
    method = direct_config.ODE_METHOD
    _, states = _run_segments(p, edges, make_rhs, z0, xs[inside], rtol, atol, method)

    Y = np.broadcast_to(eye, (xs.size, n, n)).copy()
    Yp = np.zeros((xs.size, n, n), dtype=complex)
    Y[inside] = states[:, :nn].reshape(-1, n, n)
    Yp[inside] = states[:, nn:].reshape(-1, n, n)

    F = phase * Y
    Fx = phase * (Yp + 1j * k * Y)
    return JostSolution(k=k, x=xs, F=F, Fx=Fx)


def jost_functions(p: PotentialSpec, k: complex, **kwargs) -> tuple[np.ndarray, np.ndarray]:
    """F(0,k) and F_x(0,k)."""
    sol = jost_solution(p, k, None, **kwargs)
    return sol.F[0], sol.Fx[0]


def jost_functions_batch(
    p: PotentialSpec,
    ks,
    *,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    margin: Optional[float] = None,
    batch_size: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    F(0,k) and F_x(0,k) for many k, each of shape (len(ks), n, n).

    The k values are sorted by |k| and integrated ``batch_size`` at a time as
    one stacked system, so every block shares a single adaptive step sequence.
    The tolerances are divided by √batch_size: solve_ivp controls the RMS error
    over the whole stacked state, and each k keeps the per-k error bound of
    ``jost_functions``. Results are returned in the order of ``ks``.

    Raises:
        UnsupportedK: some k has Im k < 0
        IntegrationFailure: the stepper failed
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=complex))
    for k in ks:
        _check_k(k)
    rtol = direct_config.ODE_RTOL if rtol is None else rtol
    atol = direct_config.ODE_ATOL if atol is None else atol
    margin = direct_config.FREE_MARGIN if margin is None else margin
    batch_size = direct_config.BATCH_SIZE if batch_size is None else batch_size

    n = p.n
    eye = np.eye(n, dtype=complex)
    f0 = np.broadcast_to(eye, (ks.size, n, n)).copy()
    fx0 = 1j * ks[:, None, None] * f0
    if p.is_zero or ks.size == 0:
        return f0, fx0

    x_start = p.support_bound + margin
    edges = [x_start, *sorted((b for b in p.breakpoints if b < x_start), reverse=True), 0.0]
    order = np.argsort(np.abs(ks), kind="stable")

    for lo in range(0, ks.size, batch_size):
        idx = order[lo : lo + batch_size]
        two_ik = (2j * ks[idx])[:, None, None]
        size = idx.size * n * n
        scale = np.sqrt(idx.size)

        def make_rhs(q_at, two_ik=two_ik, size=size, m=idx.size):
            def rhs(x, z):
                y = z[:size].reshape(m, n, n)
                yp = z[size:].reshape(m, n, n)
                return np.concatenate([yp.ravel(), (q_at(x) @ y - two_ik * yp).ravel()])

            return rhs

        z0 = np.concatenate([np.tile(eye.ravel(), idx.size), np.zeros(size, dtype=complex)])
        z_end, _ = _run_segments(
            p,
            edges,
            make_rhs,
            z0,
            np.empty(0),
            max(rtol / scale, _RTOL_FLOOR),
            atol / scale,
            direct_config.ODE_METHOD,
        )
        # x = 0, where the phase factor is one
        y = z_end[:size].reshape(-1, n, n)
        yp = z_end[size:].reshape(-1, n, n)
        f0[idx] = y
        fx0[idx] = yp + 1j * ks[idx][:, None, None] * y
        logger.debug(f"Jost block |k| ≤ {float(np.max(np.abs(ks[idx]))):.4g} ({idx.size} values)")
    return f0, fx0


def standard_solutions(
    p: PotentialSpec,
    k: complex,
    x_eval,
    *,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> StandardSolutions:
    """
    Θ and Φ with Θ(0) = I, Θ_x(0) = 0, Φ(0) = 0, Φ_x(0) = I, for any complex k.

    Raises:
        IntegrationFailure: the stepper failed
    """
    k = complex(k)
    xs = _check_x(x_eval)
    rtol = direct_config.ODE_RTOL if rtol is None else rtol
    atol = direct_config.ODE_ATOL if atol is None else atol
    n = p.n
    eye = np.eye(n, dtype=complex)
    k2 = k * k

    # Columns [Θ | Φ] integrated together
    y0 = np.hstack([eye, np.zeros((n, n), dtype=complex)])
    yp0 = np.hstack([np.zeros((n, n), dtype=complex), eye])
    size = 2 * n * n

    support = 0.0 if p.is_zero else p.support_bound
    inside = (xs <= support) if support > 0.0 else np.zeros(xs.size, dtype=bool)
    y_s, yp_s = y0, yp0
    Y = np.zeros((xs.size, n, 2 * n), dtype=complex)
    Yp = np.zeros((xs.size, n, 2 * n), dtype=complex)

    if support > 0.0:
        edges = [0.0, *[b for b in p.breakpoints if b < support], support]

        def make_rhs(q_at):
            def rhs(x, z):
                y = z[:size].reshape(n, 2 * n)
                yp = z[size:].reshape(n, 2 * n)
                return np.concatenate([yp.ravel(), ((q_at(x) - k2 * eye) @ y).ravel()])

            return rhs

        z0 = np.concatenate([y0.ravel(), yp0.ravel()])
        z_end, states = _run_segments(
            p, edges, make_rhs, z0, xs[inside], rtol, atol, direct_config.ODE_METHOD
        )
        Y[inside] = states[:, :size].reshape(-1, n, 2 * n)
        Yp[inside] = states[:, size:].reshape(-1, n, 2 * n)
        y_s = z_end[:size].reshape(n, 2 * n)
        yp_s = z_end[size:].reshape(n, 2 * n)

    # Exact continuation through the free region
    d = xs[~inside] - support
    c = np.cos(k * d)[:, None, None]
    s_over_k = (np.sinc(k * d / np.pi) * d)[:, None, None]
    Y[~inside] = c * y_s + s_over_k * yp_s
    Yp[~inside] = -(k2 * s_over_k) * y_s + c * yp_s

    return StandardSolutions(
        k=k,
        x=xs,
        Theta=Y[:, :, :n],
        Theta_x=Yp[:, :, :n],
        Phi=Y[:, :, n:],
        Phi_x=Yp[:, :, n:],
    )
