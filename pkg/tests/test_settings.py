"""Configuration defaults and environment overrides."""

import pytest
from pydantic import ValidationError

from scatter_lens.config import DirectConfig, InverseConfig, RunDefaults, run_defaults


def test_run_defaults():
    assert run_defaults.K_MAX == 40.0
    assert run_defaults.N_K == 800
    assert run_defaults.X_MAX == 15.0
    assert run_defaults.N_X == 600
    assert run_defaults.UNITARITY_TOL == 1e-6
    assert run_defaults.MARCHENKO_TOL == 1e-8


def test_environment_override(monkeypatch):
    monkeypatch.setenv("SCATTER_K_MAX", "60")
    monkeypatch.setenv("SCATTER_ODE_METHOD", "RK45")
    assert RunDefaults().K_MAX == 60.0
    assert DirectConfig().ODE_METHOD == "RK45"


def test_unknown_ode_method_rejected(monkeypatch):
    monkeypatch.setenv("SCATTER_ODE_METHOD", "Euler")
    with pytest.raises(ValidationError):
        DirectConfig()


def test_fraction_bounds(monkeypatch):
    monkeypatch.setenv("SCATTER_TAPER_FRACTION", "0.8")
    with pytest.raises(ValidationError):
        InverseConfig()
