import math

import numpy as np
import pytest

from bipolar_blowup import geometry, spectral_reference, validation
from bipolar_blowup.boundary_data import gradient_array, value_array
from bipolar_blowup.errors import DomainError
from bipolar_blowup.objs.config_objs import RunConfig
from bipolar_blowup.objs.field_objs import BoundaryKind, Side
from bipolar_blowup.objs.geometry_objs import BipolarPoint


def test_linear_expansion_reproduces_coordinates(frame):
    expansion = spectral_reference.linear_bipolar_expansion(frame, n_modes=200)
    xi = np.array([0.5, 1.0, 2.0])
    theta = np.array([0.3, -2.0, 3.0])
    z = geometry.z_array(frame, xi, theta)
    x1, x2 = expansion.evaluate(xi, theta)
    np.testing.assert_allclose(x1, z.real, atol=1e-12)
    np.testing.assert_allclose(x2, z.imag, atol=1e-12)


def test_mode_count(frame):
    n, truncated = spectral_reference.mode_count(frame, 2.0)
    assert not truncated
    assert abs(1.0 / 3.0) * math.exp(-(n - 16) * frame.xi_gap) <= 1e-12
    assert spectral_reference.mode_count(frame, 1.0) == (spectral_reference.DEFAULT_N_MODES, False)
    n, truncated = spectral_reference.mode_count(frame, 1e6, n_cap=100)
    assert (n, truncated) == (100, True)


def test_nonpositive_conductivity(frame, cos_dirichlet):
    with pytest.raises(DomainError):
        spectral_reference.solve_modes(frame, 0.0, cos_dirichlet, BoundaryKind.DIRICHLET)


@pytest.mark.parametrize("kind", list(BoundaryKind))
def test_unit_conductivity_is_background(frame, cos_dirichlet, kind):
    sol = spectral_reference.solve_modes(frame, 1.0, cos_dirichlet, kind)
    assert not np.any(sol.shell_a) and not np.any(sol.shell_b) and not np.any(sol.core_s)
    xi, theta = validation.interior_points(frame, 20)
    samples = spectral_reference.eval_mode_array(sol, xi, theta)
    np.testing.assert_allclose(samples.gradient, gradient_array(sol.background, samples.z), atol=1e-14)


@pytest.mark.parametrize("kind", list(BoundaryKind))
@pytest.mark.parametrize("k", [2.0, 0.5, 20.0])
def test_linear_background_matches_closed_form(frame, kind, k):
    c1, c2 = 1.0, 0.5
    sol = spectral_reference.solve_modes(frame, k, validation.linear_field(frame.r_e, c1, c2), kind)
    for got, want in zip((sol.shell_a, sol.shell_b, sol.core_s),
                         spectral_reference.linear_mode_prediction(frame, k, kind, c1, c2, 64)):
        np.testing.assert_allclose(got[:64], want, atol=1e-10 * np.max(np.abs(want)))


def test_sign_mutation_is_detected(monkeypatch):
    original = spectral_reference.linear_dirichlet_coefficients

    def flipped(frame, k, n_max):
        a, b = original(frame, k, n_max)
        return -a, b

    monkeypatch.setattr(spectral_reference, "linear_dirichlet_coefficients", flipped)
    result = validation.CHECKS["linear_mode_coefficients"](RunConfig())
    assert not result.passed


def test_dirichlet_condition_on_outer_circle(frame, cos_dirichlet):
    sol = spectral_reference.solve_modes(frame, 8.0, cos_dirichlet, BoundaryKind.DIRICHLET)
    samples = spectral_reference.eval_level(sol, frame.xi_e, 256)
    np.testing.assert_allclose(samples.value, value_array(sol.background, samples.z), atol=1e-11)


def test_neumann_condition_on_outer_circle(frame, cos_neumann):
    sol = spectral_reference.solve_modes(frame, 8.0, cos_neumann, BoundaryKind.NEUMANN)
    samples = spectral_reference.eval_level(sol, frame.xi_e, 256)
    background_xi, _ = geometry.project_gradient(frame, samples.xi, samples.theta,
                                                 gradient_array(sol.background, samples.z))
    scale = np.max(np.abs(samples.gradient))
    np.testing.assert_allclose(samples.grad_xi, background_xi, atol=1e-10 * scale)


@pytest.mark.parametrize("kind", list(BoundaryKind))
def test_transmission_conditions(frame, cos_dirichlet, kind):
    k = 4.0
    sol = spectral_reference.solve_modes(frame, k, cos_dirichlet, kind)
    inner = spectral_reference.eval_level(sol, frame.xi_i, 256, Side.INNER)
    outer = spectral_reference.eval_level(sol, frame.xi_i, 256, Side.OUTER)
    scale = np.max(np.abs(outer.gradient))
    np.testing.assert_allclose(inner.value, outer.value, atol=1e-10 * max(1.0, scale))
    np.testing.assert_allclose(inner.grad_theta, outer.grad_theta, atol=1e-10 * scale)
    np.testing.assert_allclose(k * inner.grad_xi, outer.grad_xi, atol=1e-9 * k * scale)


def test_level_synthesis_matches_direct_sums(frame, balanced_dirichlet):
    sol = spectral_reference.solve_modes(frame, 16.0, balanced_dirichlet, BoundaryKind.DIRICHLET)
    for level in (frame.xi_e + 0.3 * frame.xi_gap, frame.xi_i + 0.01):
        fast = spectral_reference.eval_level(sol, level, 128)
        direct = spectral_reference.eval_mode_array(sol, fast.xi, fast.theta)
        np.testing.assert_allclose(fast.value, direct.value, atol=1e-11)
        np.testing.assert_allclose(fast.gradient, direct.gradient, atol=1e-9 * np.max(np.abs(direct.gradient)))


def test_eval_grid_and_point_agree(frame, cos_neumann):
    sol = spectral_reference.solve_modes(frame, 0.25, cos_neumann, BoundaryKind.NEUMANN)
    p = BipolarPoint(xi=frame.xi_e + 0.5 * frame.xi_gap, theta=0.2)
    sample = spectral_reference.eval_mode_solution(sol, frame, p)
    points = spectral_reference.eval_mode_points(sol, np.array([sample.point.z]))
    assert sample.gradient == pytest.approx((points.gradient[0].real, points.gradient[0].imag), rel=1e-10)
    other = geometry.derive_frame(frame.geometry.copy(update={"eps": 0.1}))
    with pytest.raises(DomainError):
        spectral_reference.eval_mode_solution(sol, other, p)
