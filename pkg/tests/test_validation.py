import math

import numpy as np
import pytest

from bipolar_blowup import reflection_solver, spectral_reference, validation
from bipolar_blowup.logger import log_errors
from bipolar_blowup.objs.config_objs import RunConfig


@pytest.fixture(scope="module")
def report():
    return validation.run_suite(RunConfig())


def test_registry():
    assert {"frame_constants", "dual_solver_agreement", "linear_mode_coefficients", "kernel_bounds",
            "image_total_charge", "image_remainder_gradient"} <= set(validation.CHECKS)
    assert {"circle_identity", "scale_factor_ratio", "reflection_involution", "boundary_reproduction",
            "extension_laplacian", "C1C2_linearity", "transmission_residual", "outer_condition_residual",
            "neumann_mean_flux", "density_zero_mean", "sandwich_ratios", "argmax_stability",
            "singular_part_consistency"} <= set(validation.CHECKS)


def test_agreement_covers_the_grid(report):
    check = next(check for check in report.checks if check.name == "dual_solver_agreement")
    assert check.context.startswith("7 (eps, k) pairs")


def test_default_suite_passes(report):
    assert [check.name for check in report.failed] == []
    assert len(report.checks) == len(validation.CHECKS)


def test_selected_checks():
    result = validation.run_suite(RunConfig(), names=["frame_constants", "lerch_closed_form"])
    assert [check.name for check in result.checks] == ["frame_constants", "lerch_closed_form"]
    assert result.passed


def test_raising_check_is_a_failure(monkeypatch):
    def broken(config):
        raise RuntimeError("no data")

    monkeypatch.setitem(validation.CHECKS, "broken", log_errors(broken))
    result = validation.run_suite(RunConfig(), names=["broken"])
    assert not result.passed
    assert math.isnan(result.checks[0].measured)


def test_mutated_neumann_coefficients_fail(monkeypatch):
    original = spectral_reference.linear_neumann_coefficients

    def flipped(frame, k, n_max):
        a, b = original(frame, k, n_max)
        return a, -b

    monkeypatch.setattr(spectral_reference, "linear_neumann_coefficients", flipped)
    result = validation.run_suite(RunConfig(), names=["linear_mode_coefficients"])
    assert not result.passed



def test_shifted_density_fails(monkeypatch):
    original = reflection_solver.density_series

    def shifted(*args, **kwargs):
        density = original(*args, **kwargs)
        return density + 1e-3 * np.max(np.abs(density))

    monkeypatch.setattr(reflection_solver, "density_series", shifted)
    result = validation.run_suite(RunConfig(), names=["density_zero_mean"])
    assert not result.passed


def test_geometry_checks_pass():
    result = validation.run_suite(RunConfig(), names=["reflection_involution", "circle_identity",
                                                      "scale_factor_ratio"])
    assert result.passed

def test_interior_points_avoid_boundaries(frame):
    xi, theta = validation.interior_points(frame, 40)
    assert xi.shape == theta.shape == (40,)
    assert np.all(xi[:20] > frame.xi_e) and np.all(xi[:20] < frame.xi_i)
    assert np.all(xi[20:] > frame.xi_i)
