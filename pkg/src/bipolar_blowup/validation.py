"""
Named numeric checks of the solvers, special functions and image charges.

Every check takes the run configuration and returns a CheckResult. Checks are
wrapped with ``log_errors``: a check that raises is logged and reported as a
failure instead of aborting the suite.
"""
import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import asymptotics, geometry, reflection_solver, special_functions, spectral_reference
from .boundary_data import (
    boundary_trace,
    data_values,
    extract_C1C2,
    gradient_array,
    harmonic_extension,
    value_array,
)
from .logger import log_errors
from .objs.config_objs import RunConfig
from .objs.field_objs import BoundaryKind, FourierBoundaryData, HarmonicDiskField, Side
from .objs.geometry_objs import BipolarFrame, BipolarPoint, CartesianPoint, Circle, DiskPairGeometry
from .objs.report_objs import CheckResult, ValidationReport

logger = logging.getLogger(__name__)

CheckFunc = Callable[[RunConfig], CheckResult]
CHECKS: Dict[str, CheckFunc] = {}

_SEED = 20240601
_N_RANDOM_POINTS = 100
_N_BOUNDARY_POINTS = 512
_AGREEMENT_EPS = (1.0 / 8.0, 1.0 / 50.0)
_AGREEMENT_K = (1.0 / 8.0, 2.0, 8.0)
_RATE_EPS = (1.0 / 50.0, 1.0 / 800.0, 1.0 / 3200.0)
_RATE_K = (2.0, 8.0, 16.0)
_RATE_POINTS = 512
_COS_DATA = FourierBoundaryData(kind=BoundaryKind.DIRICHLET, r_e=5.0, cos_coeffs=(1.0,))


def register_check(name: str):
    def _decorator(func: CheckFunc) -> CheckFunc:
        CHECKS[name] = log_errors(func)
        return func

    return _decorator


def _result(name: str, tolerance: float, measured: float, context: str = "") -> CheckResult:
    measured = float(measured)
    return CheckResult(
        name=name,
        tolerance=tolerance,
        measured=measured,
        passed=bool(measured <= tolerance),
        context=context,
    )


def _frame(config: RunConfig, eps: Optional[float] = None) -> BipolarFrame:
    geom = config.geometry
    return geometry.derive_frame(DiskPairGeometry(r_i=geom.r_i, r_e=geom.r_e, eps=eps or geom.epsilons()[0]))


def interior_points(frame: BipolarFrame, n: int, seed: int = _SEED) -> Tuple[np.ndarray, np.ndarray]:
    """
    Half of the points in the shell, half in the inclusion, kept off both boundaries.
    """
    rng = np.random.default_rng(seed)
    n_shell = n // 2
    xi = np.concatenate([
        frame.xi_e + frame.xi_gap * rng.uniform(0.05, 0.95, n_shell),
        frame.xi_i + rng.uniform(0.05, 2.0, n - n_shell) * max(frame.xi_gap, 0.1),
    ])
    theta = rng.uniform(-math.pi, math.pi, n)
    return xi, theta


def linear_field(r_e: float, c1: float, c2: float) -> HarmonicDiskField:
    """
    The background C1 x1 + C2 x2 (up to a constant) as a degree-one disk field.
    """
    return HarmonicDiskField(center=(r_e, 0.0), radius=r_e, cos_coeffs=(c1 * r_e,), sin_coeffs=(c2 * r_e,))


def _configured_field(config: RunConfig, frame: BipolarFrame, kind: Optional[BoundaryKind] = None) -> HarmonicDiskField:
    data = config.boundary_data.to_data(frame.r_e)
    if kind is not None:
        data = data.copy(update={"kind": kind})
    return harmonic_extension(data)


def _reference_frame(eps: float) -> BipolarFrame:
    return geometry.derive_frame(DiskPairGeometry(r_i=2.0, r_e=5.0, eps=eps))


# region Geometry
@register_check("frame_constants")
def check_frame_constants(config: RunConfig) -> CheckResult:
    frame = geometry.derive_frame(DiskPairGeometry(r_i=2.0, r_e=5.0, eps=1.0 / 50.0))
    expected = {"alpha": 0.367534, "c_i": 2.033490, "c_e": 5.013490}
    error = max(abs(getattr(frame, name) - value) for name, value in expected.items())
    return _result("frame_constants", 1e-5, error, "r_i=2, r_e=5, eps=1/50")


@register_check("coordinate_round_trip")
def check_coordinate_round_trip(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    xi, theta = interior_points(frame, _N_RANDOM_POINTS)
    z = geometry.z_array(frame, xi, theta)
    back = geometry.z_array(frame, *geometry.bipolar_array(frame, z))
    error = float(np.max(np.abs(back - z) / np.maximum(1.0, np.abs(z))))
    return _result("coordinate_round_trip", 1e-12, error, f"eps={frame.eps}")


@register_check("circle_identity")
def check_circle_identity(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    error = 0.0
    for level, center, radius in ((frame.xi_i, frame.c_i, frame.r_i), (frame.xi_e, frame.c_e, frame.r_e)):
        circle = geometry.level_circle(frame, level)
        error = max(error, abs(circle.center[0] - center) / center, abs(circle.center[1]),
                    abs(circle.radius - radius) / radius)
    return _result("circle_identity", 1e-12, error, f"eps={frame.eps}")


@register_check("scale_factor_ratio")
def check_scale_factor_ratio(config: RunConfig) -> CheckResult:
    """
    Largest h(xi) / h(xi') over xi <= xi' on a level-angle grid; at most 1.
    """
    frame = _frame(config)
    levels = np.linspace(frame.xi_e, frame.xi_i + 2.0, 60)
    theta = np.linspace(-math.pi, math.pi, 121)
    h = np.array([geometry.scale_factor_array(frame, level, theta) for level in levels])
    return _result("scale_factor_ratio", 1.0, float(np.max(h[:-1] / h[1:])), f"eps={frame.eps}")


@register_check("reflection_involution")
def check_reflection_involution(config: RunConfig) -> CheckResult:
    """
    Reflecting twice across a boundary level is the identity, and once is the
    inversion in that circle.
    """
    frame = _frame(config)
    xi, theta = interior_points(frame, _N_RANDOM_POINTS)
    error = 0.0
    for level in (frame.xi_e, frame.xi_i):
        for p in (BipolarPoint(xi=a, theta=b) for a, b in zip(xi, theta)):
            twice = geometry.reflect_level(frame, level, geometry.reflect_level(frame, level, p))
            error = max(error, abs(twice.xi - p.xi), abs(twice.theta - p.theta))
        circle = geometry.level_circle(frame, level)
        center = complex(*circle.center)
        z = geometry.z_array(frame, xi, theta)
        inverted = center + circle.radius ** 2 / np.conj(z - center)
        mirrored = geometry.z_array(frame, 2.0 * level - xi, theta)
        error = max(error, float(np.max(np.abs(mirrored - inverted) / np.maximum(1.0, np.abs(inverted)))))
    return _result("reflection_involution", 1e-9, error, f"eps={frame.eps}")


# endregion Geometry

# region Boundary data
@register_check("boundary_reproduction")
def check_boundary_reproduction(config: RunConfig) -> CheckResult:
    data = config.boundary_data.to_data(config.geometry.r_e)
    field = harmonic_extension(data)
    t = 2.0 * np.pi * np.arange(_N_BOUNDARY_POINTS) / _N_BOUNDARY_POINTS - np.pi
    expected = data_values(data, t)
    error = float(np.max(np.abs(boundary_trace(field, data.kind, t) - expected)))
    return _result("boundary_reproduction", 1e-12, error / max(1.0, float(np.max(np.abs(expected)))),
                   f"{_N_BOUNDARY_POINTS} points; {data.kind.value}")


@register_check("extension_laplacian")
def check_extension_laplacian(config: RunConfig) -> CheckResult:
    """
    Five-point Laplacian of the extension at points inside the outer disk.
    """
    r_e = config.geometry.r_e
    field = harmonic_extension(config.boundary_data.to_data(r_e))
    z = r_e + r_e * np.array([0.0, 0.3 + 0.2j, -0.5 - 0.1j, 0.1 - 0.6j])
    step = 1e-3 * r_e
    laplacian = (value_array(field, z + step) + value_array(field, z - step) + value_array(field, z + 1j * step)
                 + value_array(field, z - 1j * step) - 4.0 * value_array(field, z)) / step ** 2
    scale = max(1.0, field.gradient_bound() / r_e)
    return _result("extension_laplacian", 1e-5, float(np.max(np.abs(laplacian))) / scale, f"{step=}")


@register_check("C1C2_linearity")
def check_C1C2_linearity(config: RunConfig) -> CheckResult:
    first = config.boundary_data.to_data(config.geometry.r_e)
    second = first.copy(update={"cos_coeffs": (-0.4, 0.0, 0.7), "sin_coeffs": (0.1, 0.9)})
    a, b = 2.5, -1.5
    n = max(first.mode_count, second.mode_count)
    coeffs = []
    for data in (first, second):
        cos_part, sin_part = data.padded()
        coeffs.append((np.pad(cos_part, (0, n - cos_part.size)), np.pad(sin_part, (0, n - sin_part.size))))
    mixed = first.copy(update={
        "cos_coeffs": tuple(a * coeffs[0][0] + b * coeffs[1][0]),
        "sin_coeffs": tuple(a * coeffs[0][1] + b * coeffs[1][1]),
    })
    expected = a * np.array(extract_C1C2(harmonic_extension(first))) + b * np.array(
        extract_C1C2(harmonic_extension(second)))
    error = float(np.max(np.abs(np.array(extract_C1C2(harmonic_extension(mixed))) - expected)))
    return _result("C1C2_linearity", 1e-12, error, f"{a=}, {b=}")


# endregion Boundary data

# region Solvers
@register_check("dual_solver_agreement")
def check_dual_solver_agreement(config: RunConfig) -> CheckResult:
    """
    Relative gap between the spectral and reflection gradients at interior points for
    eps in (1/8, 1/50), k in (1/8, 2, 8) and the configured (eps, k), both conditions.
    """
    cfg = reflection_solver.ReflectionSeriesConfig(tol=config.tolerances.reflection,
                                                   n_max=config.tolerances.reflection_n_max)
    configured = _frame(config)
    cases = [(_reference_frame(eps), k) for eps in _AGREEMENT_EPS for k in _AGREEMENT_K]
    cases.append((configured, config.conductivity.resolve([configured.eps])[0]))
    worst, where = 0.0, ""
    for frame, k in cases:
        field = _configured_field(config, frame)
        xi, theta = interior_points(frame, _N_RANDOM_POINTS)
        for kind in BoundaryKind:
            sol = spectral_reference.solve_modes(frame, k, field, kind, tol=config.tolerances.spectral)
            spectral = spectral_reference.eval_mode_array(sol, xi, theta)
            series = reflection_solver.reflection_array(frame, k, field, kind, xi, theta, cfg)
            scale = max(float(np.max(np.abs(spectral.gradient))), 1e-300)
            gap = float(np.max(np.abs(spectral.gradient - series.gradient))) / scale
            if gap >= worst:
                worst, where = gap, f"eps={frame.eps:.6g}, {k=:.6g}, {kind.value}"
    return _result("dual_solver_agreement", config.tolerances.solver_agreement, worst,
                   f"{len(cases)} (eps, k) pairs; worst at {where}")


@register_check("unit_conductivity")
def check_unit_conductivity(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    field = harmonic_extension(config.boundary_data.to_data(frame.r_e))
    xi, theta = interior_points(frame, _N_RANDOM_POINTS)
    background = gradient_array(field.translated(frame.x_0), geometry.z_array(frame, xi, theta))
    worst = 0.0
    for kind in BoundaryKind:
        sol = spectral_reference.solve_modes(frame, 1.0, field, kind)
        spectral = spectral_reference.eval_mode_array(sol, xi, theta)
        series = reflection_solver.reflection_array(frame, 1.0, field, kind, xi, theta)
        worst = max(worst, float(np.max(np.abs(spectral.gradient - background))),
                    float(np.max(np.abs(series.gradient - background))))
    return _result("unit_conductivity", 1e-12, worst, f"eps={frame.eps}")


@register_check("linear_mode_coefficients")
def check_linear_mode_coefficients(config: RunConfig) -> CheckResult:
    """
    Spectral coefficients for a linear background against the closed forms, n <= 64.
    """
    frame = geometry.derive_frame(DiskPairGeometry(r_i=2.0, r_e=5.0, eps=1.0 / 50.0))
    c1, c2 = 1.0, 0.5
    field = linear_field(frame.r_e, c1, c2)
    n_max = 64
    worst = 0.0
    for kind in BoundaryKind:
        for k in (2.0, 0.5):
            sol = spectral_reference.solve_modes(frame, k, field, kind)
            predicted = spectral_reference.linear_mode_prediction(frame, k, kind, c1, c2, n_max)
            computed = (sol.shell_a[:n_max], sol.shell_b[:n_max], sol.core_s[:n_max])
            for got, want in zip(computed, predicted):
                scale = max(float(np.max(np.abs(want))), 1e-300)
                worst = max(worst, float(np.max(np.abs(got - want))) / scale)
    return _result("linear_mode_coefficients", 1e-10, worst, "eps=1/50; k in (2, 1/2)")


@register_check("transmission_residual")
def check_transmission_residual(config: RunConfig) -> CheckResult:
    """
    Jumps of u, of the tangential derivative and of the weighted flux across the
    inclusion boundary, relative to the largest gradient there.
    """
    frame = _frame(config)
    k = config.conductivity.resolve([frame.eps])[0]
    worst = 0.0
    for kind in BoundaryKind:
        sol = spectral_reference.solve_modes(frame, k, _configured_field(config, frame), kind,
                                             tol=config.tolerances.spectral)
        inner = spectral_reference.eval_level(sol, frame.xi_i, 512, Side.INNER)
        outer = spectral_reference.eval_level(sol, frame.xi_i, 512, Side.OUTER)
        scale = max(1.0, float(np.max(np.abs(outer.gradient))))
        worst = max(
            worst,
            float(np.max(np.abs(inner.value - outer.value))) / scale,
            float(np.max(np.abs(inner.grad_theta - outer.grad_theta))) / scale,
            float(np.max(np.abs(k * inner.grad_xi - outer.grad_xi))) / (max(1.0, k) * scale),
        )
    return _result("transmission_residual", 1e-8, worst, f"eps={frame.eps}; {k=}")


@register_check("outer_condition_residual")
def check_outer_condition_residual(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    k = config.conductivity.resolve([frame.eps])[0]
    worst = 0.0
    for kind in BoundaryKind:
        sol = spectral_reference.solve_modes(frame, k, _configured_field(config, frame), kind,
                                             tol=config.tolerances.spectral)
        samples = spectral_reference.eval_level(sol, frame.xi_e, 512)
        if kind is BoundaryKind.DIRICHLET:
            expected = value_array(sol.background, samples.z)
            residual = np.abs(samples.value - expected)
        else:
            expected, _ = geometry.project_gradient(frame, samples.xi, samples.theta,
                                                    gradient_array(sol.background, samples.z))
            residual = np.abs(samples.grad_xi - expected)
        scale = max(1.0, float(np.max(np.abs(samples.gradient))))
        worst = max(worst, float(np.max(residual)) / scale)
    return _result("outer_condition_residual", 1e-9, worst, f"eps={frame.eps}; {k=}")


@register_check("neumann_mean_flux")
def check_neumann_mean_flux(config: RunConfig) -> CheckResult:
    """
    Net flux of the Neumann solution through the outer circle, relative to the
    largest normal derivative there.
    """
    frame = _frame(config)
    k = config.conductivity.resolve([frame.eps])[0]
    sol = spectral_reference.solve_modes(frame, k, _configured_field(config, frame, BoundaryKind.NEUMANN),
                                         BoundaryKind.NEUMANN, tol=config.tolerances.spectral)
    # the trapezoid mean aliases modes n = m, which decay like exp(-n xi_e)
    n_theta = max(512, 1 << int(math.ceil(math.log2(40.0 / frame.xi_e))))
    samples = spectral_reference.eval_level(sol, frame.xi_e, n_theta)
    d_xi = samples.grad_xi / geometry.scale_factor_array(frame, samples.xi, samples.theta)
    measured = abs(float(np.mean(d_xi))) / max(float(np.max(np.abs(d_xi))), 1e-300)
    return _result("neumann_mean_flux", 1e-12, measured, f"eps={frame.eps}; {k=}; {n_theta=}")


@register_check("disk_layer_identity")
def check_disk_layer_identity(config: RunConfig) -> CheckResult:
    disk = Circle(center=(1.0, 0.5), radius=2.0)
    v = HarmonicDiskField(center=disk.center, radius=disk.radius, cos_coeffs=(0.3, -0.2, 0.1),
                          sin_coeffs=(0.7, 0.0, 0.05), offset=1.5)
    points = [CartesianPoint(x1=1.3, x2=0.2), CartesianPoint(x1=-0.4, x2=1.1), CartesianPoint(x1=4.5, x2=-2.0)]
    residual = max(reflection_solver.disk_layer_identity_check(disk, v, x) for x in points)
    return _result("disk_layer_identity", 1e-10, residual, "degree-3 polynomial, three points")


@register_check("inclusion_ratio_constant")
def check_inclusion_ratio_constant(config: RunConfig) -> CheckResult:
    constants = [reflection_solver.inclusion_ratio_constant(_frame(config, eps)) for eps in (1.0 / 50.0, 1.0 / 3200.0)]
    spread = max(constants) / min(constants)
    return _result("inclusion_ratio_constant", 2.0, spread, f"{constants=}")


@register_check("density_zero_mean")
def check_density_zero_mean(config: RunConfig) -> CheckResult:
    frame = _reference_frame(1.0 / 8.0)
    field = _configured_field(config, frame, BoundaryKind.NEUMANN)
    worst = 0.0
    for k in (1.0 / 3.0, 3.0):
        for side, level in ((Side.INNER, frame.xi_i), (Side.OUTER, frame.xi_e)):
            circle = geometry.level_circle(frame, level)
            _, theta = geometry.bipolar_array(frame, reflection_solver.circle_nodes(circle, 1024))
            density = reflection_solver.density_series(frame, k, field, side, theta)
            worst = max(worst, abs(float(np.mean(density))) / max(float(np.max(np.abs(density))), 1e-300))
    return _result("density_zero_mean", 1e-10, worst, "eps=1/8; k in (1/3, 3); 1024 nodes per circle")


# endregion Solvers

# region Special functions
@register_check("lerch_series_vs_quadrature")
def check_lerch_series_vs_quadrature(config: RunConfig) -> CheckResult:
    radii = np.array([0.1, 0.4, 0.7])
    angles = np.linspace(-math.pi, math.pi, 9)
    z = np.outer(radii, np.exp(1j * angles)).ravel()
    worst = 0.0
    for b in (0.3, 1.0, 2.5, 10.0):
        worst = max(
            worst,
            float(np.max(np.abs(special_functions.lerch_series(z, b) - special_functions.lerch_quad(z, b)))),
            float(np.max(np.abs(special_functions.kernel_series(z, b) - special_functions.kernel_quad(z, b)))),
        )
    return _result("lerch_series_vs_quadrature", 1e-10, worst, "|z| <= 0.7")


@register_check("lerch_closed_form")
def check_lerch_closed_form(config: RunConfig) -> CheckResult:
    value = complex(special_functions.lerch_L(0.5, 1.0))
    return _result("lerch_closed_form", 1e-6, abs(value - (2.0 * math.log(1.5) - 1.0)), "L(0.5; 1)")


@register_check("kernel_bounds")
def check_kernel_bounds(config: RunConfig) -> CheckResult:
    """
    Largest ratio of |P| (or of the P increment) to its bound on a dense grid; at most 1.
    """
    s = np.linspace(0.01, 3.0, 40)[:, None]
    theta = np.linspace(-math.pi, math.pi, 41)[None, :]
    worst = 0.0
    for b in (0.5, 2.0, 8.0):
        kernel = special_functions.kernel_P(np.exp(-s + 1j * theta), b)
        worst = max(worst, float(np.max(np.abs(kernel) / special_functions.kernel_bound(s, theta, b))))
        shifted = special_functions.kernel_P(np.exp(-(s + 0.1) + 1j * theta), b)
        lipschitz = special_functions.kernel_lipschitz_bound(s, s + 0.1, theta)
        worst = max(worst, float(np.max(np.abs(shifted - kernel) / lipschitz)))
        for s0, t0 in ((0.05, 0.0), (0.5, 1.0), (1.5, 3.0)):
            refined = special_functions.refined_kernel_bound(s0, t0, b)
            worst = max(worst, abs(complex(special_functions.kernel_P(math.exp(-s0) * complex(math.cos(t0), -math.sin(t0)), b))) / refined)
    return _result("kernel_bounds", 1.0, worst, "beta in (0.5, 2, 8)")


# endregion Special functions

# region Image charges
@register_check("image_density_endpoint")
def check_image_density_endpoint(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    k = config.conductivity.resolve([frame.eps])[0]
    system = asymptotics.image_charge_system(frame, k if k != 1.0 else 2.0, "v")
    _, psi = asymptotics.image_density(system, system.c_i)
    return _result("image_density_endpoint", 1e-12, abs(float(psi) - 1.0), f"beta={system.beta}")


@register_check("image_total_charge")
def check_image_total_charge(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    worst = 0.0
    for k in (2.0, 8.0, 1.0 / 8.0):
        system = asymptotics.image_charge_system(frame, k, "v")
        worst = max(worst, abs(asymptotics.total_charge(system) - 1.0))
    return _result("image_total_charge", 1e-8, worst, "k in (2, 8, 1/8)")


@register_check("image_remainder_gradient")
def check_image_remainder_gradient(config: RunConfig) -> CheckResult:
    """
    |grad r_+| times r_i at 50 shell points; at most 1.
    """
    frame = _frame(config)
    rng = np.random.default_rng(_SEED)
    xi = frame.xi_e + frame.xi_gap * rng.uniform(0.1, 0.9, 50)
    theta = rng.uniform(-math.pi, math.pi, 50)
    remainder = asymptotics.lerch_image_remainder(frame, 2.0, xi, theta)
    return _result("image_remainder_gradient", 1.0 + 1e-6, float(np.max(remainder)) * frame.r_i, f"eps={frame.eps}")


@register_check("asymptotic_zero_data")
def check_asymptotic_zero_data(config: RunConfig) -> CheckResult:
    frame = _frame(config)
    c1, c2 = extract_C1C2(harmonic_extension(config.boundary_data.to_data(frame.r_e)))
    xi = np.full(8, frame.xi_e + 0.5 * frame.xi_gap)
    theta = np.linspace(-3.0, 3.0, 8)
    along_xi = asymptotics.grad_v_asymptotic_array(frame, 2.0, 0.0, 0.0, xi, theta)
    along = asymptotics.grad_u_asymptotic_array(frame, 0.5, 0.0, 0.0, xi, theta)
    measured = float(np.max(np.abs(along_xi))) + float(np.max(np.abs(along[0]))) + float(np.max(np.abs(along[1])))
    return _result("asymptotic_zero_data", 0.0, measured, f"configured data has C1={c1:.6g}, C2={c2:.6g}")


# endregion Image charges

# region Blow-up rates
@register_check("sandwich_ratios")
def check_sandwich_ratios(config: RunConfig) -> CheckResult:
    """
    Spread max/min of sup |grad v| (1/k + sqrt(eps)) / (|C1| + |C2|) along the schedule
    k = sqrt(0.08 / eps); bounded when the upper bound is attained.
    """
    report = asymptotics.rate_sweep(2.0, 5.0, _RATE_EPS, _RATE_K, _COS_DATA, n_theta=_RATE_POINTS,
                                    threads=config.threads, tol=config.tolerances.spectral)
    ratios = asymptotics.sandwich_ratios(report)
    return _result("sandwich_ratios", 4.0, max(ratios) / min(ratios), f"{ratios=}")


@register_check("argmax_stability")
def check_argmax_stability(config: RunConfig) -> CheckResult:
    """
    Distance, in grid spacings, between the peaks of the exact and the leading-order
    normal derivative on the inclusion boundary; at most one.
    """
    eps, k = _RATE_EPS[-1], _RATE_K[-1]
    profile = asymptotics.boundary_profile(_reference_frame(eps), k, harmonic_extension(_COS_DATA),
                                           BoundaryKind.DIRICHLET, cross_check=False, tol=config.tolerances.spectral)
    spacing = 2.0 * math.pi / profile.theta.size
    exact_peak = profile.theta[np.argmax(np.abs(profile.exact_xi))]
    asymptotic_peak = profile.theta[np.argmax(np.abs(profile.asym_primary))]
    shift = abs(float(geometry.normalize_angle_array(exact_peak - asymptotic_peak))) / spacing
    return _result("argmax_stability", 1.0 + 1e-9, shift, f"{eps=}, {k=}")


@register_check("singular_part_consistency")
def check_singular_part_consistency(config: RunConfig) -> CheckResult:
    """
    Growth of sup |grad (v - singular part)| from the widest to the narrowest gap; the
    remainder stays bounded while the singular part blows up.
    """
    field = harmonic_extension(_COS_DATA)
    c1, c2 = extract_C1C2(field)
    remainders = []
    for eps, k in zip(_RATE_EPS, _RATE_K):
        sol = spectral_reference.solve_modes(_reference_frame(eps), k, field, BoundaryKind.DIRICHLET,
                                             tol=config.tolerances.spectral)
        remainders.append(asymptotics.singular_remainder_norm(sol, c1, c2, n_theta=_RATE_POINTS))
    return _result("singular_part_consistency", 3.0, remainders[-1] / max(remainders[0], 1e-300),
                   f"{remainders=}")


# endregion Blow-up rates

def run_suite(config: RunConfig, names: Optional[Iterable[str]] = None) -> ValidationReport:
    checks: List[CheckResult] = []
    for name in names or CHECKS:
        result = CHECKS[name](config)
        if result is None:
            result = CheckResult(name=name, tolerance=math.nan, measured=math.nan, passed=False,
                                 context="raised; see log")
        logger.info(f"{result.name}: {result.passed=}; {result.measured=}; {result.tolerance=}")
        checks.append(result)
    report = ValidationReport(checks=checks)
    if not report.passed:
        logger.warning(f"failed checks: {[check.name for check in report.failed]}")
    return report
