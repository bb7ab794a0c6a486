import math

import numpy as np
import pytest

from bipolar_blowup import asymptotics, geometry, spectral_reference
from bipolar_blowup.boundary_data import extract_C1C2
from bipolar_blowup.errors import DomainError
from bipolar_blowup.objs.asymptotic_objs import ChargeBranch
from bipolar_blowup.objs.field_objs import BoundaryKind, FourierBoundaryData, Side
from bipolar_blowup.objs.geometry_objs import BipolarPoint, CartesianPoint
from bipolar_blowup.reflection_solver import beta, tau

from .conftest import make_field, make_frame

COS = FourierBoundaryData(kind=BoundaryKind.DIRICHLET, r_e=5.0, cos_coeffs=(1.0,))
COS_NEUMANN = FourierBoundaryData(kind=BoundaryKind.NEUMANN, r_e=5.0, cos_coeffs=(1.0,))
BALANCED = FourierBoundaryData(kind=BoundaryKind.DIRICHLET, r_e=5.0, cos_coeffs=(1.0, 0.5))

DIRICHLET_EPS = [1.0 / 50.0, 1.0 / 3200.0, 1.0 / 204800.0]
DIRICHLET_K = [2.0, 16.0, 128.0]
NEUMANN_EPS = [1.0 / 3200.0, 1.0 / 204800.0]
NEUMANN_K = [1.0 / 40.0, 1.0 / 320.0]


def shell_grid(frame, n=40):
    xi = frame.xi_e + frame.xi_gap * np.linspace(0.05, 0.95, 5)[:, None] * np.ones(n)
    theta = np.ones(5)[:, None] * np.linspace(-3.0, 3.0, n)
    return xi.ravel(), theta.ravel()


# region Leading-order formulas
def test_zero_data_gives_zero(frame):
    xi, theta = shell_grid(frame)
    assert not np.any(asymptotics.grad_v_asymptotic_array(frame, 2.0, 0.0, 0.0, xi, theta))
    along_xi, along_theta = asymptotics.grad_u_asymptotic_array(frame, 2.0, 0.0, 0.0, xi, theta)
    assert not np.any(along_xi) and not np.any(along_theta)
    value, gradient = asymptotics.singular_part_array(frame, 1.0, 1.0, 0.0, xi, theta, BoundaryKind.DIRICHLET)
    assert not np.any(value) and not np.any(gradient)


def test_v_formula_is_shell_only(frame):
    with pytest.raises(DomainError):
        asymptotics.grad_v_asymptotic_array(frame, 2.0, 1.0, 0.0, [frame.xi_i + 0.1], [0.0])
    with pytest.raises(DomainError):
        asymptotics.grad_v_asymptotic_array(frame, 2.0, 1.0, 0.0, [frame.xi_i - 0.01], [0.0], variant="other")


def test_v_vector_is_along_e_xi(frame):
    p = BipolarPoint(xi=frame.xi_e + 0.5 * frame.xi_gap, theta=0.3)
    gx, gy = asymptotics.grad_v_asymptotic(frame, 4.0, 1.0, 0.5, p)
    (ex1, ex2), (et1, et2) = geometry.basis_vectors(frame, p)
    assert gx * et1 + gy * et2 == pytest.approx(0.0, abs=1e-12)
    along = float(asymptotics.grad_v_asymptotic_array(frame, 4.0, 1.0, 0.5, p.xi, p.theta))
    assert gx * ex1 + gy * ex2 == pytest.approx(along)


def test_u_formula_has_no_shell_normal_component(frame):
    xi, theta = shell_grid(frame)
    along_xi, along_theta = asymptotics.grad_u_asymptotic_array(frame, 0.25, 1.0, 0.0, xi, theta)
    assert not np.any(along_xi)
    assert np.any(along_theta)
    p = BipolarPoint(xi=frame.xi_i + 0.05, theta=0.2)
    gx, gy = asymptotics.grad_u_asymptotic(frame, 0.25, 1.0, 0.0, p)
    assert math.hypot(gx, gy) > 0.0


@pytest.mark.parametrize("eps", [1.0 / 50.0, 1.0 / 3200.0])
def test_formula_variants_differ_by_order_one(eps):
    frame = make_frame(eps)
    k, c1, c2 = 64.0, 1.0, 0.5
    xi, theta = shell_grid(frame)
    primary = asymptotics.grad_v_asymptotic_array(frame, k, c1, c2, xi, theta)
    alternative = asymptotics.grad_v_asymptotic_array(frame, k, c1, c2, xi, theta, variant="alternative")
    bound = frame.r_star / math.sqrt(eps) * frame.xi_i * (abs(c1) + abs(c2))
    assert np.max(np.abs(primary - alternative)) <= bound * (1.0 + 1e-9)
    assert bound <= 2.0 * frame.r_star ** 2 / frame.r_i * (abs(c1) + abs(c2))


def test_tangential_jump_of_u_formula_is_order_one(frame):
    k, c1, c2 = 0.05, 1.0, 0.0
    theta = np.linspace(-3.0, 3.0, 61)
    xi = np.full(theta.shape, frame.xi_i)
    _, inside = asymptotics.grad_u_asymptotic_array(frame, k, c1, c2, xi, theta, Side.INNER)
    _, outside = asymptotics.grad_u_asymptotic_array(frame, k, c1, c2, xi, theta, Side.OUTER)
    bound = frame.r_star * abs(tau(k)) * frame.xi_i / math.sqrt(frame.eps) * (abs(c1) + abs(c2))
    assert np.max(np.abs(inside - outside)) <= bound * (1.0 + 1e-9)


def test_singular_part_gradient_matches_formula(frame):
    k, c1, c2 = 8.0, 1.0, 0.0
    xi, theta = shell_grid(frame, 10)
    _, gradient = asymptotics.singular_part_array(frame, k, c1, c2, xi, theta, BoundaryKind.DIRICHLET)
    along_xi, _ = geometry.project_gradient(frame, xi, theta, gradient)
    leading = asymptotics.grad_v_asymptotic_array(frame, k, c1, c2, xi, theta)
    # the two differ by the regular Lerch term, of order one
    assert np.max(np.abs(along_xi - leading)) <= frame.r_star ** 2 / frame.r_i * 4.0


# endregion Leading-order formulas

# region Image charges
def test_image_systems(frame):
    k = 4.0
    prefactor = frame.r_star ** 2 * tau(k)
    v = asymptotics.image_charge_system(frame, k, "v")
    assert v.branch is ChargeBranch.PLUS and v.prefactor == pytest.approx(-prefactor)
    assert v.support == (frame.alpha, frame.c_i)
    v_alt = asymptotics.image_charge_system(frame, k, "v_alt")
    assert v_alt.branch is ChargeBranch.MINUS and v_alt.prefactor == pytest.approx(-prefactor)
    u = asymptotics.image_charge_system(frame, k, "u")
    assert u.branch is ChargeBranch.MINUS and u.prefactor == pytest.approx(prefactor)
    u_alt = asymptotics.image_charge_system(frame, k, "u_alt")
    assert u_alt.branch is ChargeBranch.PLUS and u_alt.prefactor == pytest.approx(-prefactor)
    assert v.beta == pytest.approx(beta(frame, k))


def test_image_density_endpoints(frame):
    system = asymptotics.image_charge_system(frame, 2.0, "v")
    phi, psi = asymptotics.image_density(system, frame.c_i)
    assert float(psi) == pytest.approx(1.0, abs=1e-12)
    assert float(phi) > 0.0
    mirrored = asymptotics.image_charge_system(frame, 2.0, "v_alt")
    phi_m, psi_m = asymptotics.image_density(mirrored, -frame.c_i)
    assert float(psi_m) == pytest.approx(-1.0, abs=1e-12)
    assert float(phi_m) == pytest.approx(-float(phi))
    with pytest.raises(DomainError):
        asymptotics.image_density(system, frame.alpha)
    with pytest.raises(DomainError):
        asymptotics.image_density(system, frame.c_i + 0.1)


def test_density_is_derivative_of_psi(frame):
    system = asymptotics.image_charge_system(frame, 3.0, "v")
    s = np.linspace(frame.alpha + 0.05, frame.c_i - 0.05, 9)
    step = 1e-6
    phi, _ = asymptotics.image_density(system, s)
    _, psi_plus = asymptotics.image_density(system, s + step)
    _, psi_minus = asymptotics.image_density(system, s - step)
    np.testing.assert_allclose((psi_plus - psi_minus) / (2 * step), phi, rtol=1e-6)


@pytest.mark.parametrize("k", [2.0, 8.0, 1.0 / 8.0, 1.2])
def test_total_charge_is_one(frame, k):
    assert asymptotics.total_charge(asymptotics.image_charge_system(frame, k, "v")) == pytest.approx(1.0, abs=1e-8)
    assert asymptotics.total_charge(asymptotics.image_charge_system(frame, k, "u")) == pytest.approx(-1.0, abs=1e-8)


def test_image_field_on_support_is_rejected(frame):
    system = asymptotics.image_charge_system(frame, 2.0, "v")
    with pytest.raises(DomainError):
        asymptotics.image_potential(system, CartesianPoint(x1=0.5 * (frame.alpha + frame.c_i), x2=0.0), 1.0, 0.0)


def test_image_gradient_matches_finite_differences(frame):
    system = asymptotics.image_charge_system(frame, 2.0, "v")
    x = CartesianPoint(x1=0.1, x2=0.3)
    step = 1e-4
    g1, g2 = asymptotics.image_potential_gradient(system, x, 1.0, 0.7)
    right = asymptotics.image_potential(system, CartesianPoint(x1=x.x1 + step, x2=x.x2), 1.0, 0.7)
    left = asymptotics.image_potential(system, CartesianPoint(x1=x.x1 - step, x2=x.x2), 1.0, 0.7)
    up = asymptotics.image_potential(system, CartesianPoint(x1=x.x1, x2=x.x2 + step), 1.0, 0.7)
    down = asymptotics.image_potential(system, CartesianPoint(x1=x.x1, x2=x.x2 - step), 1.0, 0.7)
    assert g1 == pytest.approx((right - left) / (2 * step), rel=1e-5)
    assert g2 == pytest.approx((up - down) / (2 * step), rel=1e-5)


@pytest.mark.parametrize("eps", [1.0 / 50.0, 1.0 / 3200.0])
def test_lerch_remainder_gradient_is_bounded(eps):
    frame = make_frame(eps)
    xi, theta = shell_grid(frame, 12)
    remainder = asymptotics.lerch_image_remainder(frame, 2.0, xi, theta)
    z = geometry.z_array(frame, xi, theta)
    assert np.all(remainder <= (1.0 + 1e-6) / frame.r_i)
    np.testing.assert_allclose(remainder, 1.0 / np.abs(z - frame.c_i), rtol=1e-6)


# endregion Image charges

# region Profiles and sweeps
def test_profile_at_unit_conductivity(frame, cos_dirichlet):
    profile = asymptotics.boundary_profile(frame, 1.0, cos_dirichlet, BoundaryKind.DIRICHLET, n_theta=64)
    assert profile.rows().shape == (64, 5)
    assert not np.any(profile.asym_primary) and not np.any(profile.asym_alternative)
    assert profile.solver_gap <= 1e-12


def test_neumann_inner_profile_has_no_alternative(frame, cos_neumann):
    profile = asymptotics.boundary_profile(frame, 0.5, cos_neumann, BoundaryKind.NEUMANN, side=Side.INNER,
                                           n_theta=32, cross_check=False)
    assert np.all(np.isnan(profile.asym_alternative))
    assert np.all(np.isfinite(profile.asym_primary))


def test_profile_solvers_agree(frame, cos_dirichlet):
    profile = asymptotics.boundary_profile(frame, 2.0, cos_dirichlet, BoundaryKind.DIRICHLET, n_theta=256)
    assert profile.solver_gap <= 1e-8
    assert profile.rows().shape == (256, 5)
    assert np.max(np.abs(profile.asym_primary)) > 0.0


def test_levels(frame):
    shell = asymptotics.shell_levels(frame)
    core = asymptotics.core_levels(frame)
    assert shell[0] == pytest.approx(frame.xi_e) and shell[-1] == pytest.approx(frame.xi_i)
    assert np.all(core >= frame.xi_i)
    assert np.all(np.diff(shell) > 0.0) and np.all(np.diff(core) > 0.0)
    near_outer = np.diff(shell)[0]
    near_inner = np.diff(shell)[-1]
    assert near_outer == pytest.approx(near_inner) and near_outer < frame.xi_gap / 100.0
    assert core[1] - core[0] < frame.xi_gap / 50.0
    assert core[-1] == pytest.approx(frame.xi_i + 2.0)


def test_sweep_theta_grid():
    theta = asymptotics.sweep_theta_grid(4096)
    assert theta.size == 4096 and np.all(np.abs(theta) < math.pi)
    spacing = np.abs(np.diff(theta))
    assert np.max(spacing) <= math.pi ** 2 / 4096 * (1.0 + 1e-9)
    assert spacing[0] < spacing[2048] / 500.0
    with pytest.raises(DomainError):
        asymptotics.sweep_theta_grid(1)


def test_classify():
    assert asymptotics.classify({"core_xi": True, "core_theta": True, "shell_xi": False, "shell_theta": True}) == "u"
    assert asymptotics.classify({"core_xi": False, "core_theta": False, "shell_xi": True, "shell_theta": False}) == "v"
    assert asymptotics.classify({"core_xi": True, "core_theta": False, "shell_xi": False, "shell_theta": False}) == "unmatched"


def test_sweep_needs_two_points():
    with pytest.raises(DomainError):
        asymptotics.rate_sweep(2.0, 5.0, [1.0 / 50.0], [2.0], COS)
    with pytest.raises(DomainError):
        asymptotics.rate_sweep(2.0, 5.0, [1.0 / 50.0, 1.0 / 100.0], [2.0], COS)


def test_short_sweep():
    report = asymptotics.rate_sweep(2.0, 5.0, [1.0 / 8.0, 1.0 / 16.0], [2.0, 2.0], COS, n_theta=256, threads=2)
    assert report.solution == "v"
    assert any("slope intervals" in warning for warning in report.warnings)
    assert all(math.isnan(bound) for bound in report.slope_intervals["shell_xi"])
    assert set(report.norms) == {"core_xi", "core_theta", "shell_xi", "shell_theta", "core_total", "shell_total"}
    assert report.c1 == pytest.approx(0.2)


@pytest.mark.slow
def test_dirichlet_blowup_rates():
    report = asymptotics.rate_sweep(2.0, 5.0, DIRICHLET_EPS, DIRICHLET_K, COS, threads=3)
    assert report.row == "v"
    assert not any("peak spans" in warning for warning in report.warnings)
    assert all(6.0 <= g <= 10.0 for g in report.growth_factors["shell_xi"])
    for name in ("core_xi", "core_theta", "shell_theta"):
        assert report.variation[name] < 2.0
    low, high = report.slope_intervals["shell_xi"]
    assert low <= report.slopes["shell_xi"] <= high
    ratios = asymptotics.sandwich_ratios(report)
    assert max(ratios) / min(ratios) < 4.0


@pytest.mark.slow
def test_neumann_blowup_rates():
    report = asymptotics.rate_sweep(2.0, 5.0, NEUMANN_EPS, NEUMANN_K, COS_NEUMANN, threads=2)
    assert report.row == "u"
    for name in ("core_xi", "core_theta", "shell_theta"):
        assert all(6.0 <= g <= 10.0 for g in report.growth_factors[name])
    assert report.variation["shell_xi"] < 2.0


@pytest.mark.slow
def test_balanced_data_stays_bounded():
    report = asymptotics.rate_sweep(2.0, 5.0, DIRICHLET_EPS, DIRICHLET_K, BALANCED, threads=3)
    assert report.row == "bounded"
    with pytest.raises(DomainError):
        asymptotics.sandwich_ratios(report)


@pytest.mark.slow
def test_asymptotic_error_relative_to_peak_decreases():
    field = make_field(BoundaryKind.DIRICHLET)
    relative = []
    for eps, k in zip(DIRICHLET_EPS, DIRICHLET_K):
        profile = asymptotics.boundary_profile(make_frame(eps), k, field, BoundaryKind.DIRICHLET, cross_check=False)
        error = np.max(np.abs(profile.exact_xi - profile.asym_primary))
        relative.append(error / np.max(np.abs(profile.exact_xi)))
    assert relative[0] > relative[1] > relative[2]


@pytest.mark.slow
def test_profile_peaks_coincide():
    frame = make_frame(1.0 / 3200.0)
    profile = asymptotics.boundary_profile(frame, 16.0, make_field(BoundaryKind.DIRICHLET), BoundaryKind.DIRICHLET,
                                           cross_check=False)
    spacing = 2.0 * math.pi / profile.theta.size
    exact_peak = profile.theta[np.argmax(np.abs(profile.exact_xi))]
    asymptotic_peak = profile.theta[np.argmax(np.abs(profile.asym_primary))]
    assert abs(exact_peak - asymptotic_peak) <= spacing * (1.0 + 1e-9)


@pytest.mark.slow
def test_singular_remainder_stays_bounded():
    field = make_field(BoundaryKind.DIRICHLET)
    c1, c2 = extract_C1C2(field)
    remainders = []
    for eps, k in zip(DIRICHLET_EPS, DIRICHLET_K):
        sol = spectral_reference.solve_modes(make_frame(eps), k, field, BoundaryKind.DIRICHLET)
        remainders.append(asymptotics.singular_remainder_norm(sol, c1, c2, n_theta=1024))
    assert remainders[-1] <= 3.0 * remainders[0]
# endregion Profiles and sweeps
