import math

import numpy as np
import pytest

from bipolar_blowup import geometry, reflection_solver, spectral_reference, validation
from bipolar_blowup.boundary_data import gradient_array
from bipolar_blowup.errors import DomainError
from bipolar_blowup.objs.field_objs import BoundaryKind, HarmonicDiskField, Side
from bipolar_blowup.objs.geometry_objs import BipolarPoint, CartesianPoint, Circle

from .conftest import make_field, make_frame

DATA_SETS = {
    "cos": ((1.0,), ()),
    "sin": ((), (1.0,)),
    "balanced": ((1.0, 0.5), ()),
}


def test_tau_and_beta(frame):
    assert reflection_solver.tau(3.0) == pytest.approx(0.5)
    assert reflection_solver.tau(1.0 / 3.0) == pytest.approx(-0.5)
    assert reflection_solver.beta(frame, 3.0) == pytest.approx(reflection_solver.beta(frame, 1.0 / 3.0))
    assert reflection_solver.beta(frame, 3.0) == pytest.approx(frame.r_star * math.log(2.0) / (4.0 * math.sqrt(frame.eps)))
    with pytest.raises(DomainError):
        reflection_solver.tau(0.0)
    with pytest.raises(DomainError):
        reflection_solver.beta(frame, 1.0)


def test_ladder_is_ordered(frame):
    ladder = reflection_solver.ReflectionLadder.from_frame(frame)
    assert ladder.is_ordered(50)
    assert ladder.inner(0) == pytest.approx(frame.xi_i)
    assert ladder.outer(1) == pytest.approx(frame.xi_i + frame.xi_gap)


@pytest.mark.parametrize("kind", list(BoundaryKind))
@pytest.mark.parametrize("data", sorted(DATA_SETS))
@pytest.mark.parametrize("k", [0.125, 2.0, 8.0])
@pytest.mark.parametrize("eps", [1.0 / 8.0, 1.0 / 50.0])
def test_solvers_agree(eps, k, data, kind):
    frame = make_frame(eps)
    field = make_field(kind, *DATA_SETS[data])
    xi, theta = validation.interior_points(frame, 100)
    spectral = spectral_reference.eval_mode_array(spectral_reference.solve_modes(frame, k, field, kind), xi, theta)
    series = reflection_solver.reflection_array(frame, k, field, kind, xi, theta)
    scale = np.max(np.abs(spectral.gradient))
    assert np.max(np.abs(series.gradient - spectral.gradient)) <= 1e-8 * scale
    assert not series.truncated


def test_point_solvers(frame, cos_dirichlet, cos_neumann):
    p = BipolarPoint(xi=frame.xi_e + 0.4 * frame.xi_gap, theta=0.1)
    v = reflection_solver.solve_v_reflection(frame, 4.0, cos_dirichlet, p)
    u = reflection_solver.solve_u_reflection(frame, 4.0, cos_neumann, p)
    sol = spectral_reference.solve_modes(frame, 4.0, cos_dirichlet, BoundaryKind.DIRICHLET)
    assert v.gradient == pytest.approx(spectral_reference.eval_mode_solution(sol, frame, p).gradient, abs=1e-8)
    assert u.terms > 0
    assert (u.grad_xi, u.grad_theta) != (v.grad_xi, v.grad_theta)


def test_term_cap_flags_truncation(frame, cos_dirichlet, caplog):
    xi, theta = validation.interior_points(frame, 10)
    cfg = reflection_solver.ReflectionSeriesConfig(tol=1e-13, n_max=2)
    samples = reflection_solver.reflection_array(frame, 50.0, cos_dirichlet, BoundaryKind.DIRICHLET, xi, theta, cfg)
    assert samples.truncated
    assert samples.terms == 2
    assert "reached" in caplog.text


def test_unit_conductivity_series(frame, cos_neumann):
    xi, theta = validation.interior_points(frame, 20)
    samples = reflection_solver.reflection_array(frame, 1.0, cos_neumann, BoundaryKind.NEUMANN, xi, theta)
    background = cos_neumann.translated(frame.x_0)
    np.testing.assert_allclose(samples.gradient, gradient_array(background, samples.z), atol=1e-14)


def test_densities_at_unit_conductivity(wide_frame, cos_neumann):
    theta = np.linspace(-3.0, 3.0, 7)
    inner = reflection_solver.density_series(wide_frame, 1.0, cos_neumann, Side.INNER, theta)
    assert not np.any(inner)
    # the outer density is minus twice the outward normal derivative of H
    outer = reflection_solver.density_series(wide_frame, 1.0, cos_neumann, Side.OUTER, theta)
    z = geometry.z_array(wide_frame, np.full(theta.shape, wide_frame.xi_e), theta)
    normal = (z - wide_frame.c_e) / wide_frame.r_e
    flux = (gradient_array(cos_neumann.translated(wide_frame.x_0), z) * np.conj(normal)).real
    np.testing.assert_allclose(outer, -2.0 * flux, atol=1e-13)


@pytest.mark.parametrize("k", [1.0 / 3.0, 3.0])
def test_densities_have_zero_mean(wide_frame, cos_neumann, k):
    for side, level in ((Side.INNER, wide_frame.xi_i), (Side.OUTER, wide_frame.xi_e)):
        circle = geometry.level_circle(wide_frame, level)
        _, theta = geometry.bipolar_array(wide_frame, reflection_solver.circle_nodes(circle, 1024))
        density = reflection_solver.density_series(wide_frame, k, cos_neumann, side, theta)
        assert abs(np.mean(density)) <= 1e-10 * np.max(np.abs(density))


def test_inner_density_is_flux_jump(wide_frame, cos_neumann):
    k = 3.0
    theta = np.linspace(-3.0, 3.0, 9)
    xi = np.full(theta.shape, wide_frame.xi_i)
    sol = spectral_reference.solve_modes(wide_frame, k, cos_neumann, BoundaryKind.NEUMANN)
    shell = spectral_reference.eval_mode_array(sol, xi, theta, Side.OUTER)
    core = spectral_reference.eval_mode_array(sol, xi, theta, Side.INNER)
    # nu = -e_xi on the inclusion boundary
    jump = -(shell.grad_xi - core.grad_xi)
    density = reflection_solver.density_series(wide_frame, k, cos_neumann, Side.INNER, theta)
    np.testing.assert_allclose(density, jump, atol=1e-9 * np.max(np.abs(jump)))


@pytest.mark.parametrize("k", [1.0, 3.0])
def test_layer_reconstruction(wide_frame, cos_neumann, k):
    frame = wide_frame
    xi = np.array([frame.xi_e + 0.5 * frame.xi_gap] * 3 + [frame.xi_i + 0.3] * 2)
    theta = np.array([2.0, 2.8, -2.5, 2.5, -3.0])
    z = geometry.z_array(frame, xi, theta)
    _, gradient = reflection_solver.reconstruct_from_densities(frame, k, cos_neumann, z)
    exact = spectral_reference.eval_mode_points(
        spectral_reference.solve_modes(frame, k, cos_neumann, BoundaryKind.NEUMANN), z)
    np.testing.assert_allclose(gradient, exact.gradient, atol=1e-6 * np.max(np.abs(exact.gradient)))


def test_disk_layer_identity():
    disk = Circle(center=(-0.5, 1.0), radius=1.5)
    v = HarmonicDiskField(center=disk.center, radius=disk.radius, cos_coeffs=(1.0, 0.2), sin_coeffs=(-0.4, 0.3),
                          offset=0.7)
    for x in (CartesianPoint(x1=-0.2, x2=1.4), CartesianPoint(x1=3.0, x2=-1.0)):
        assert reflection_solver.disk_layer_identity_check(disk, v, x) <= 1e-10
    with pytest.raises(DomainError):
        reflection_solver.disk_layer_identity_check(disk, v, CartesianPoint(x1=1.0, x2=1.0))
    with pytest.raises(DomainError):
        reflection_solver.disk_layer_identity_check(Circle(center=(0.0, 0.0), radius=1.5), v, CartesianPoint(x1=0.0, x2=0.0))


def test_single_layer_rejects_nodes():
    circle = Circle(center=(0.0, 0.0), radius=1.0)
    with pytest.raises(DomainError):
        reflection_solver.single_layer(circle, np.ones(8), np.array([1.0 + 0.0j]))


def test_inclusion_ratio_constant_is_bounded():
    constants = [reflection_solver.inclusion_ratio_constant(make_frame(eps)) for eps in (1.0 / 50.0, 1.0 / 3200.0)]
    assert max(constants) / min(constants) < 2.0
    sums = reflection_solver.inclusion_ratio_sums(make_frame(1.0 / 50.0), np.array([math.pi / 2, math.pi]))
    assert np.all(sums >= 1.0)
