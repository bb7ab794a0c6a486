import numpy as np
import pytest

from bipolar_blowup.boundary_data import (
    boundary_trace,
    data_values,
    eval_field,
    extract_C1C2,
    grad_field,
    gradient_array,
    harmonic_extension,
    value_array,
)
from bipolar_blowup.errors import DomainError
from bipolar_blowup.objs.field_objs import BoundaryKind, FourierBoundaryData
from bipolar_blowup.objs.geometry_objs import CartesianPoint

T = np.linspace(-np.pi, np.pi, 512, endpoint=False)


@pytest.mark.parametrize("kind", list(BoundaryKind))
def test_trace_reproduces_data(kind):
    data = FourierBoundaryData(kind=kind, r_e=5.0, cos_coeffs=(1.0, 0.0, -0.3), sin_coeffs=(0.2, 0.4))
    field = harmonic_extension(data)
    np.testing.assert_allclose(boundary_trace(field, kind, T), data_values(data, T), atol=1e-13)


@pytest.mark.parametrize("kind", list(BoundaryKind))
def test_extension_is_harmonic(kind):
    data = FourierBoundaryData(kind=kind, r_e=5.0, cos_coeffs=(1.0, 0.5, -0.3, 0.1), sin_coeffs=(0.2, -0.4, 0.3))
    field = harmonic_extension(data)
    z = np.array([5.0 + 0.0j, 3.0 + 2.0j, 7.5 - 1.0j, 2.0 - 3.0j])
    step = 1e-3
    laplacian = (value_array(field, z + step) + value_array(field, z - step) + value_array(field, z + 1j * step)
                 + value_array(field, z - 1j * step) - 4.0 * value_array(field, z)) / step ** 2
    np.testing.assert_allclose(laplacian, 0.0, atol=1e-5)


@pytest.mark.parametrize("kind", list(BoundaryKind))
def test_C1C2_is_linear_in_the_data(kind):
    first = FourierBoundaryData(kind=kind, r_e=5.0, cos_coeffs=(1.0, -0.3, 0.2), sin_coeffs=(0.5,))
    second = FourierBoundaryData(kind=kind, r_e=5.0, cos_coeffs=(-0.4, 0.0, 0.7), sin_coeffs=(0.1, 0.9))
    a, b = 2.5, -1.5
    mixed = FourierBoundaryData(
        kind=kind,
        r_e=5.0,
        cos_coeffs=(a * 1.0 + b * -0.4, a * -0.3, a * 0.2 + b * 0.7),
        sin_coeffs=(a * 0.5 + b * 0.1, b * 0.9),
    )
    first_c = np.array(extract_C1C2(harmonic_extension(first)))
    second_c = np.array(extract_C1C2(harmonic_extension(second)))
    np.testing.assert_allclose(extract_C1C2(harmonic_extension(mixed)), a * first_c + b * second_c, atol=1e-14)


def test_dirichlet_cosine_is_linear(cos_dirichlet):
    # cos t on the circle extends to (x1 - r_e) / r_e
    assert eval_field(cos_dirichlet, CartesianPoint(x1=7.0, x2=1.0)) == pytest.approx(0.4)
    assert grad_field(cos_dirichlet, CartesianPoint(x1=3.0, x2=-2.0)) == pytest.approx((0.2, 0.0))
    assert extract_C1C2(cos_dirichlet) == pytest.approx((0.2, 0.0))


def test_neumann_cosine_has_unit_gradient(cos_neumann):
    assert extract_C1C2(cos_neumann) == pytest.approx((1.0, 0.0))


def test_sine_data():
    field = harmonic_extension(FourierBoundaryData(kind=BoundaryKind.DIRICHLET, r_e=5.0, sin_coeffs=(1.0,)))
    assert extract_C1C2(field) == pytest.approx((0.0, 0.2))


def test_balanced_data_has_no_gradient_at_touch_point(balanced_dirichlet):
    c1, c2 = extract_C1C2(balanced_dirichlet)
    assert c1 == pytest.approx(0.0, abs=1e-15)
    assert c2 == pytest.approx(0.0, abs=1e-15)


def test_gradient_matches_finite_differences(balanced_dirichlet):
    z = np.array([4.0 + 1.0j, 6.5 - 2.0j])
    step = 1e-6
    d1 = (value_array(balanced_dirichlet, z + step) - value_array(balanced_dirichlet, z - step)) / (2 * step)
    d2 = (value_array(balanced_dirichlet, z + 1j * step) - value_array(balanced_dirichlet, z - 1j * step)) / (2 * step)
    np.testing.assert_allclose(gradient_array(balanced_dirichlet, z), d1 + 1j * d2, rtol=1e-7)


def test_outside_disk(cos_dirichlet):
    with pytest.raises(DomainError):
        value_array(cos_dirichlet, np.array([11.0 + 0.0j]))
    # translated copies move the disk
    moved = cos_dirichlet.translated(1.0)
    assert value_array(moved, np.array([11.0 + 0.0j]))[0] == pytest.approx(1.0)


def test_truncation_and_regularity(caplog):
    data = FourierBoundaryData(kind=BoundaryKind.DIRICHLET, r_e=5.0, cos_coeffs=(1.0,) * 10, n_modes=4)
    assert data.mode_count == 4
    assert "truncated" in caplog.text
    assert data.regularity_sum() == pytest.approx(1 + 4 + 9 + 16)


def test_gradient_bound(balanced_dirichlet):
    t = np.linspace(0.0, 2.0 * np.pi, 400)
    z = balanced_dirichlet.center_z + balanced_dirichlet.radius * np.exp(1j * t)
    assert np.max(np.abs(gradient_array(balanced_dirichlet, z))) <= balanced_dirichlet.gradient_bound() + 1e-14
