"""The ``selftest`` subcommand: analytic cases with known answers."""

import argparse
from typing import Any, Callable, Optional

import numpy as np
from pydantic import BaseModel
from scipy.optimize import brentq

from scatter_lens.direct.bound_states import find_bound_states
from scatter_lens.direct.scattering import compute_scattering_data
from scatter_lens.exceptions import ScatterLensError, ToleranceExceeded
from scatter_lens.inverse.pipeline import invert_full
from scatter_lens.inverse.reflectionless import reflectionless_data, reflectionless_kernel, reflectionless_potential
from scatter_lens.spectral.boundary import dirichlet, neumann, robin_boundary
from scatter_lens.spectral.grids import uniform_kgrid, uniform_xgrid
from scatter_lens.spectral.potential import square_well, zero_potential
from scatter_lens.utils.linalg import frobenius
from scatter_lens.utils.logger import get_logger

from ..runconfig import RunConfig
from .common import failure

logger = get_logger(__name__)

_KGRID = (40.0, 64)


class CaseResult(BaseModel):
    name: str
    passed: bool
    error: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""


def square_well_kappas(strength: float, width: float) -> list[float]:
    """
    Bound states of Q = −strength on [0, width] with f(0) = 0.

    Roots of q·cot(q·width) = −κ, q = √(strength − κ²), found as zeros of
    q·cos(q·width) + κ·sin(q·width), which has no poles.
    """

    def g(kappa: float) -> float:
        q = np.sqrt(strength - kappa * kappa)
        return q * np.cos(q * width) + kappa * np.sin(q * width)

    top = np.sqrt(strength) * (1.0 - 1e-9)
    grid = np.linspace(1e-9, top, 4001)
    values = np.array([g(k) for k in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if fa * fb < 0.0:
            roots.append(float(brentq(g, a, b, xtol=1e-14, rtol=1e-15)))
    return roots


def _free(bc, exact) -> tuple[float, str]:
    kgrid = uniform_kgrid(*_KGRID)
    sd = compute_scattering_data(zero_potential(bc.n), bc, kgrid)
    target = np.stack([exact(k) for k in kgrid.k_values])
    err = float(np.max(frobenius(sd.S - target)))
    return err, f"{len(sd.bound_states)} bound state(s)"


def _free_dirichlet() -> tuple[float, float, str]:
    err, detail = _free(dirichlet(), lambda k: -np.eye(1))
    return err, 1e-10, detail


def _free_neumann() -> tuple[float, float, str]:
    err, detail = _free(neumann(), lambda k: np.eye(1))
    return err, 1e-10, detail


def _free_robin(h: float) -> Callable[[], tuple[float, float, str]]:
    def case() -> tuple[float, float, str]:
        bc = robin_boundary(h)
        err, detail = _free(bc, lambda k: np.array([[(1j * k + h) / (1j * k - h)]]))
        if h < 0.0:
            kappas = [bs.kappa for bs in find_bound_states(zero_potential(), bc)]
            if len(kappas) != 1:
                return float("inf"), 1e-8, f"expected one bound state, found {len(kappas)}"
            err = max(err, abs(kappas[0] + h))
        return err, 1e-8, detail

    return case


def _square_well() -> tuple[float, float, str]:
    strength, width = 30.0, 1.0
    expected = square_well_kappas(strength, width)
    found = [bs.kappa for bs in find_bound_states(square_well(-strength, width), dirichlet())]
    if len(found) != len(expected):
        return float("inf"), 1e-8, f"found {len(found)} bound states, expected {len(expected)}"
    err = max(abs(a - b) for a, b in zip(sorted(found), expected))
    return err, 1e-8, f"{len(found)} bound state(s)"


def _reflectionless() -> tuple[float, float, str]:
    kappa, gamma = 1.0, 2.0
    sd = reflectionless_data(kappa, gamma, uniform_kgrid(10.0, 64))
    xgrid = uniform_xgrid(3.0, 121)
    result = invert_full(sd, xgrid)
    k_err = max(
        float(np.max(np.abs(row.K - reflectionless_kernel(kappa, gamma, [row.x], row.nodes)[0])))
        for row in result.kernel.rows
    )
    q_err = float(np.max(np.abs(result.Q - reflectionless_potential(kappa, gamma, xgrid))))
    return q_err, 1e-4, f"kernel error {k_err:.2e}"


CASES: dict[str, Callable[[], tuple[float, float, str]]] = {
    "free_dirichlet": _free_dirichlet,
    "free_neumann": _free_neumann,
    "free_robin_repulsive": _free_robin(0.5),
    "free_robin_attractive": _free_robin(-2.0),
    "square_well": _square_well,
    "reflectionless": _reflectionless,
}


def run_case(name: str) -> CaseResult:
    try:
        err, tol, detail = CASES[name]()
    except ScatterLensError as exc:
        logger.error(f"✗ {name}: {type(exc).__name__}: {exc}")
        return CaseResult(name=name, passed=False, detail=f"{type(exc).__name__}: {exc}")
    passed = err <= tol
    mark = "✓" if passed else "✗"
    logger.info(f"{mark} {name}: error {err:.2e} (tol {tol:.0e}) {detail}")
    return CaseResult(name=name, passed=passed, error=err, tolerance=tol, detail=detail)


def run_selftest(cfg: RunConfig) -> dict[str, Any]:
    """
    Run every analytic case.

    Returns:
        Result dictionary with one entry per case; fails with
        ToleranceExceeded when any case fails
    """
    cases = [run_case(name).model_dump() for name in CASES]
    failed = [c["name"] for c in cases if not c["passed"]]
    if failed:
        return failure(ToleranceExceeded(f"self-test failed: {', '.join(failed)}"), cases=cases)
    return {"success": True, "exit_code": 0, "cases": cases}


def register_selftest_command(subparsers, common: argparse.ArgumentParser) -> None:
    """Register ``selftest`` with the top-level parser."""
    parser = subparsers.add_parser(
        "selftest",
        parents=[common],
        help="run the built-in analytic cases and print pass/fail",
    )
    parser.set_defaults(handler=run_selftest)
