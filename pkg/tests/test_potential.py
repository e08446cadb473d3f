"""Potential presets, sampled potentials and validation."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from scatter_lens.exceptions import ShapeMismatch, ValidationError
from scatter_lens.spectral import (
    diagonal_wells,
    reflectionless,
    sampled_potential,
    smooth_bump,
    square_well,
    uniform_kgrid,
    uniform_xgrid,
    validate_potential,
    zero_potential,
)


class TestPresets:
    def test_zero(self):
        p = zero_potential(2)
        assert p.is_zero
        assert_allclose(p.evaluate([0.0, 1.0]), 0.0)
        assert validate_potential(p).passed

    def test_square_well(self):
        p = square_well(-5.0, 1.5, n=2)
        q = p.evaluate([0.0, 1.0, 1.5, 2.0])
        assert_allclose(q[0], -5.0 * np.eye(2))
        assert_allclose(q[2], -5.0 * np.eye(2))
        assert_allclose(q[3], 0.0)
        assert p.breakpoints == (1.5,)

    def test_diagonal_wells(self, three_wells):
        q = three_wells.evaluate([0.9, 1.2])
        assert_allclose(np.diag(q[0]).real, [-6.0, 0.0, -3.0])
        assert_allclose(np.diag(q[1]).real, [0.0, 0.0, -3.0])
        assert three_wells.support_bound == 1.5

    def test_smooth_bump(self, bump2):
        q = bump2.evaluate([0.0, 1.0, 2.0, 3.0])
        assert_allclose(q[1], bump2.amplitude)
        assert_allclose(q[[0, 2, 3]], 0.0, atol=1e-30)
        report = validate_potential(bump2)
        assert report.passed
        assert report.hermiticity_residual < 1e-14

    def test_reflectionless(self):
        p = reflectionless(1.0, 2.0)
        assert_allclose(p.evaluate([0.0])[0, 0, 0].real, -2.0)
        assert p(p.support_bound + 1.0)[0, 0] == 0.0

    def test_invalid_widths(self):
        with pytest.raises(ValidationError):
            square_well(-1.0, 0.0)
        with pytest.raises(ShapeMismatch):
            smooth_bump(np.ones((2, 3)), 1.0)


class TestSampled:
    def test_linear_interpolation_and_zero_beyond(self):
        p = sampled_potential([0.0, 1.0, 2.0], np.array([0.0, -2.0, 0.0]))
        assert_allclose(p.evaluate([0.5, 1.5, 3.0])[:, 0, 0], [-1.0, -1.0, 0.0])

    def test_non_ascending(self):
        with pytest.raises(ValidationError):
            sampled_potential([0.0, 2.0, 1.0], np.zeros(3))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            sampled_potential([0.0, 1.0], np.zeros((3, 2, 2)))

    def test_non_hermitian_is_reported(self):
        values = np.zeros((3, 2, 2), dtype=complex)
        values[1, 0, 1] = 1.0
        report = validate_potential(sampled_potential([0.0, 1.0, 2.0], values))
        assert not report.passed
        assert report.hermiticity_residual > 0.5

    def test_nonzero_beyond_support(self):
        p = sampled_potential([0.0, 1.0, 2.0], np.array([-1.0, -1.0, -1.0]), support_bound=1.0)
        report = validate_potential(p)
        assert not report.support_consistent


class TestGrids:
    def test_kgrid_excludes_zero(self):
        grid = uniform_kgrid(40.0, 800)
        assert grid.size == 800
        assert grid.k_values[0] == pytest.approx(0.05)
        assert grid.k_max == pytest.approx(40.0)
        assert grid.is_uniform

    def test_xgrid(self):
        x = uniform_xgrid(15.0, 600)
        assert x[0] == 0.0 and x[-1] == 15.0 and x.size == 600

    def test_invalid_requests(self):
        with pytest.raises(ValidationError):
            uniform_kgrid(-1.0, 10)
        with pytest.raises(ValidationError):
            uniform_xgrid(1.0, 1)
