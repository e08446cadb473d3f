"""Validated run configuration assembled from the command line."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from scatter_lens.config import run_defaults

RunMode = Literal["direct", "inverse", "roundtrip", "stargraph", "selftest"]


class RunConfig(BaseModel):
    """
    One command invocation.

    Numeric fields default to the SCATTER_* run defaults, so a RunConfig built
    from nothing but a mode reproduces the documented default grids.
    """

    mode: RunMode
    potential: Optional[Path] = None
    boundary: Optional[Path] = None
    data: Optional[Path] = None
    out: Optional[Path] = None

    k_max: float = Field(default_factory=lambda: run_defaults.K_MAX)
    n_k: int = Field(default_factory=lambda: run_defaults.N_K)
    x_max: float = Field(default_factory=lambda: run_defaults.X_MAX)
    n_x: int = Field(default_factory=lambda: run_defaults.N_X)

    unitarity_tol: float = Field(default_factory=lambda: run_defaults.UNITARITY_TOL)
    marchenko_tol: float = Field(default_factory=lambda: run_defaults.MARCHENKO_TOL)
    q_error_tol: float = Field(default_factory=lambda: run_defaults.Q_ERROR_TOL)
    u_error_tol: float = Field(default_factory=lambda: run_defaults.U_ERROR_TOL)

    force: bool = False
    json_summary: bool = False

    @field_validator("n_k", "n_x")
    @classmethod
    def check_grid_size(cls, v: int) -> int:
        if v < 16:
            raise ValueError(f"grid sizes must be at least 16, got {v}")
        return v

    @field_validator("k_max", "x_max", "unitarity_tol", "marchenko_tol", "q_error_tol", "u_error_tol")
    @classmethod
    def check_positive(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError(f"must be positive, got {v}")
        return v

