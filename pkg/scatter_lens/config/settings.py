"""
Configuration settings for scatter-lens.

Every setting can be overridden from the environment (or a ``.env`` file in the
working directory) using the ``SCATTER_`` prefixed name shown in its alias.

Environment Variables:
- SCATTER_DEBUG: Enable DEBUG logging (default: false)
- SCATTER_LOG_FILE: Optional log file path
- SCATTER_USE_COLORS: Colored console logging (default: true)
- SCATTER_UNITARY_ADMISSION_TOL: ‖U†U − I‖ admitted before polar re-projection (default: 1e-8)
- SCATTER_UHAT_ANGLE_TOL: |arg z − π| below which an eigenvalue of U counts as −1 (default: 1e-6)
- SCATTER_ODE_RTOL / SCATTER_ODE_ATOL: integrator tolerances (default: 1e-10 / 1e-12)
- SCATTER_BATCH_SIZE: k values integrated together in one stacked system (default: 32)
- SCATTER_TAIL_TERMS: pole terms in the fitted high-k tail of S − Û (default: 3)
- SCATTER_K_MAX, SCATTER_N_K, SCATTER_X_MAX, SCATTER_N_X: default run grids
- SCATTER_CONDITION_LIMIT: Nyström condition number limit (default: 1e10)
"""

from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class SpectralConfig(BaseSettings):
    """Tolerances for boundary algebra and potential validation."""

    UNITARY_ADMISSION_TOL: float = Field(1e-8, alias="SCATTER_UNITARY_ADMISSION_TOL")
    UHAT_ANGLE_TOL: float = Field(1e-6, alias="SCATTER_UHAT_ANGLE_TOL")
    HERMITIAN_TOL: float = Field(1e-10, alias="SCATTER_HERMITIAN_TOL")
    INTEGRABILITY_LIMIT: float = Field(1e6, alias="SCATTER_INTEGRABILITY_LIMIT")
    VALIDATION_POINTS: int = Field(2001, alias="SCATTER_VALIDATION_POINTS")

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore", populate_by_name=True
    )


class DirectConfig(BaseSettings):
    """Direct problem: ODE integration, bound-state search, normalisation."""

    ODE_METHOD: Literal["DOP853", "RK45"] = Field("DOP853", alias="SCATTER_ODE_METHOD")
    ODE_RTOL: float = Field(1e-10, alias="SCATTER_ODE_RTOL")
    ODE_ATOL: float = Field(1e-12, alias="SCATTER_ODE_ATOL")
    FREE_MARGIN: float = Field(2.0, alias="SCATTER_FREE_MARGIN")
    K_MIN: float = Field(1e-2, alias="SCATTER_K_MIN")
    BATCH_SIZE: int = Field(32, alias="SCATTER_BATCH_SIZE")

    KAPPA_MIN: float = Field(1e-3, alias="SCATTER_KAPPA_MIN")
    KAPPA_SCAN_POINTS: int = Field(400, alias="SCATTER_KAPPA_SCAN_POINTS")
    ROOT_TOL: float = Field(1e-10, alias="SCATTER_ROOT_TOL")
    RANK_TOL: float = Field(1e-7, alias="SCATTER_RANK_TOL")
    ROOT_RESIDUAL_TOL: float = Field(1e-6, alias="SCATTER_ROOT_RESIDUAL_TOL")
    MINUS_CONDITION_LIMIT: float = Field(1e10, alias="SCATTER_MINUS_CONDITION_LIMIT")

    NORMALIZATION_PANELS: int = Field(64, alias="SCATTER_NORMALIZATION_PANELS")
    NORMALIZATION_ORDER: int = Field(16, alias="SCATTER_NORMALIZATION_ORDER")

    VIRTUAL_LEVEL_EPS: float = Field(1e-3, alias="SCATTER_VIRTUAL_LEVEL_EPS")
    VIRTUAL_LEVEL_RATIO: float = Field(50.0, alias="SCATTER_VIRTUAL_LEVEL_RATIO")

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore", populate_by_name=True
    )


class InverseConfig(BaseSettings):
    """Inverse problem: Fourier kernel, Nyström solve, recovery."""

    TAPER_FRACTION: float = Field(0.1, alias="SCATTER_TAPER_FRACTION")
    TAIL_FIT_FRACTION: float = Field(0.2, alias="SCATTER_TAIL_FIT_FRACTION")
    TAIL_POLE: float = Field(1.0, alias="SCATTER_TAIL_POLE")
    TAIL_TERMS: int = Field(3, alias="SCATTER_TAIL_TERMS")
    DECAY_TOL: float = Field(0.5, alias="SCATTER_DECAY_TOL")
    TAIL_MISFIT_TOL: float = Field(0.05, alias="SCATTER_TAIL_MISFIT_TOL")

    T_MIN: float = Field(15.0, alias="SCATTER_T_MIN")
    PANEL_LENGTH: float = Field(0.25, alias="SCATTER_PANEL_LENGTH")
    PANEL_ORDER: int = Field(8, alias="SCATTER_PANEL_ORDER")
    CONDITION_LIMIT: float = Field(1e10, alias="SCATTER_CONDITION_LIMIT")
    G_SAMPLES_PER_UNIT: int = Field(200, alias="SCATTER_G_SAMPLES_PER_UNIT")

    PROBE_COUNT: int = Field(5, alias="SCATTER_PROBE_COUNT")
    ROUGHNESS_LIMIT: float = Field(0.5, alias="SCATTER_ROUGHNESS_LIMIT")
    HERMITIAN_WARN_TOL: float = Field(1e-6, alias="SCATTER_HERMITIAN_WARN_TOL")

    @field_validator("TAPER_FRACTION", "TAIL_FIT_FRACTION")
    @classmethod
    def check_fraction(cls, v: float) -> float:
        """Fractions of the k-grid must lie in [0, 0.5]."""
        if not 0.0 <= v <= 0.5:
            raise ValueError(f"fraction must lie in [0, 0.5], got {v}")
        return v

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore", populate_by_name=True
    )


class RunDefaults(BaseSettings):
    """Defaults for the command-line runs."""

    K_MAX: float = Field(40.0, alias="SCATTER_K_MAX")
    N_K: int = Field(800, alias="SCATTER_N_K")
    X_MAX: float = Field(15.0, alias="SCATTER_X_MAX")
    N_X: int = Field(600, alias="SCATTER_N_X")
    UNITARITY_TOL: float = Field(1e-6, alias="SCATTER_UNITARITY_TOL")
    MARCHENKO_TOL: float = Field(1e-8, alias="SCATTER_MARCHENKO_TOL")
    Q_ERROR_TOL: float = Field(0.05, alias="SCATTER_Q_ERROR_TOL")
    U_ERROR_TOL: float = Field(1e-2, alias="SCATTER_U_ERROR_TOL")

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore", populate_by_name=True
    )


class Settings(BaseSettings):
    """Main application settings."""

    PROJECT_NAME: str = "scatter-lens"
    VERSION: str = "0.1.0"

    DEBUG: bool = Field(False, alias="SCATTER_DEBUG")
    LOG_FILE: Optional[str] = Field(None, alias="SCATTER_LOG_FILE")
    USE_COLORS: bool = Field(True, alias="SCATTER_USE_COLORS")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
        populate_by_name=True,
    )


# Create settings instances
settings = Settings()
spectral_config = SpectralConfig()
direct_config = DirectConfig()
inverse_config = InverseConfig()
run_defaults = RunDefaults()
