"""
Singular parts of the gradient, their image line-charge representation and
blow-up rate sweeps.
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, stats

from . import geometry
from .boundary_data import extract_C1C2, harmonic_extension
from .errors import DomainError
from .objs.asymptotic_objs import (
    NORM_NAMES,
    TABLE_ROWS,
    BlowUpReport,
    BoundaryProfile,
    ChargeBranch,
    ImageChargeSystem,
    ImageFormula,
    SolutionName,
)
from .objs.field_objs import BipolarModeSolution, BoundaryKind, FourierBoundaryData, HarmonicDiskField, Side
from .objs.geometry_objs import BipolarFrame, BipolarPoint, CartesianPoint, DiskPairGeometry
from .reflection_solver import ReflectionSeriesConfig, beta, reflection_array, tau
from .special_functions import kernel_P, singular_array
from .spectral_reference import DEFAULT_TOL, eval_level, eval_mode_array, solve_modes
from .utils import collect_in_batches, in_separate_thread

logger = logging.getLogger(__name__)

DEFAULT_PROFILE_POINTS = 1024
DEFAULT_SWEEP_POINTS = 4096
BOUNDED_VARIATION = 2.0
_BOUNDARY_RTOL = 1e-12
_IMAGE_EPSABS = 1e-13
_IMAGE_EPSREL = 1e-11
_GRADING = 0.5
_SHELL_GRADED_LEVELS = 8
_CORE_FINEST = 2.0 ** -6
_CORE_DEEPEST = 2.0
_PEAK_MIN_POINTS = 8


def _is_trivial(t: float, c1: float, c2: float) -> bool:
    return t == 0.0 or (c1 == 0.0 and c2 == 0.0)


def _leading_factor(frame: BipolarFrame, t: float, xi: np.ndarray, theta: np.ndarray) -> np.ndarray:
    return frame.r_star * t / math.sqrt(frame.eps) * (np.cosh(xi) + np.cos(theta))


def _check_shell(frame: BipolarFrame, xi: np.ndarray) -> None:
    if np.any(xi < frame.xi_e * (1.0 - _BOUNDARY_RTOL)) or np.any(xi > frame.xi_i * (1.0 + _BOUNDARY_RTOL)):
        raise DomainError("point outside the shell between the two boundaries")


def _vector(frame: BipolarFrame, p: BipolarPoint, along_xi: float, along_theta: float) -> Tuple[float, float]:
    (ex1, ex2), (et1, et2) = geometry.basis_vectors(frame, p)
    return along_xi * ex1 + along_theta * et1, along_xi * ex2 + along_theta * et2


# region Leading-order formulas
def grad_v_asymptotic_array(frame: BipolarFrame, k: float, c1: float, c2: float, xi, theta,
                            variant: str = "primary") -> np.ndarray:
    """
    e_xi component of the blow-up term of grad v in the shell:
    (r_* tau / sqrt(eps)) (cosh xi + cos theta) [C1 Re P + C2 Im P], with P at
    e^{-(2 xi_i - xi) - i theta} ("primary") or e^{-(xi + 2 xi_i) - i theta} ("alternative").
    """
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(theta, dtype=float))
    _check_shell(frame, xi)
    t = tau(k)
    if _is_trivial(t, c1, c2):
        return np.zeros(xi.shape)
    if variant == "primary":
        z = np.exp(-(2.0 * frame.xi_i - xi) - 1j * theta)
    elif variant == "alternative":
        z = np.exp(-(xi + 2.0 * frame.xi_i) - 1j * theta)
    else:
        raise DomainError(f"unknown {variant=}")
    kernel = kernel_P(z, beta(frame, k))
    return _leading_factor(frame, t, xi, theta) * (c1 * kernel.real + c2 * kernel.imag)


def grad_v_asymptotic(frame: BipolarFrame, k: float, c1: float, c2: float, p: BipolarPoint,
                      variant: str = "primary") -> Tuple[float, float]:
    along_xi = float(grad_v_asymptotic_array(frame, k, c1, c2, p.xi, p.theta, variant))
    return _vector(frame, p, along_xi, 0.0)


def grad_u_asymptotic_array(frame: BipolarFrame, k: float, c1: float, c2: float, xi, theta,
                            side: Optional[Side] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    (e_xi, e_theta) components of the blow-up term of grad u. In the inclusion
    P is taken at e^{-(xi + 2 xi_i) - i theta}; in the shell at
    e^{-(2 xi_i - xi) - i theta} and the e_xi component is of order one, returned as 0.

    The two P arguments differ on the inclusion boundary, so the e_theta component jumps
    there by an amount bounded by the order-one kernel bound; the exact field is continuous.
    """
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(theta, dtype=float))
    core = geometry.core_mask(frame, xi, side)
    t = tau(k)
    along_xi = np.zeros(xi.shape)
    along_theta = np.zeros(xi.shape)
    if _is_trivial(t, c1, c2):
        return along_xi, along_theta
    b = beta(frame, k)
    factor = _leading_factor(frame, t, xi, theta)
    z = np.where(core, np.exp(-(xi + 2.0 * frame.xi_i) - 1j * theta), np.exp(-(2.0 * frame.xi_i - xi) - 1j * theta))
    kernel = kernel_P(z, b)
    along_xi = np.where(core, -factor * (c1 * kernel.real + c2 * kernel.imag), 0.0)
    along_theta = factor * (c1 * kernel.imag - c2 * kernel.real)
    return along_xi, along_theta


def grad_u_asymptotic(frame: BipolarFrame, k: float, c1: float, c2: float, p: BipolarPoint,
                      side: Optional[Side] = None) -> Tuple[float, float]:
    along_xi, along_theta = grad_u_asymptotic_array(frame, k, c1, c2, p.xi, p.theta, side)
    return _vector(frame, p, float(along_xi), float(along_theta))


def singular_part_array(frame: BipolarFrame, k: float, c1: float, c2: float, xi, theta,
                        kind: BoundaryKind) -> Tuple[np.ndarray, np.ndarray]:
    """
    (r_*^2 tau / 2) [C1 Re q + C2 Im q] and its gradient, q = q_u for Neumann data, q_d for Dirichlet.
    """
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(theta, dtype=float))
    t = tau(k)
    if _is_trivial(t, c1, c2):
        return np.zeros(xi.shape), np.zeros(xi.shape, dtype=complex)
    q, dq_xi, dq_theta = singular_array(frame, xi, theta, beta(frame, k), neumann=kind is BoundaryKind.NEUMANN)
    factor = 0.5 * frame.r_star ** 2 * t

    def combine(values: np.ndarray) -> np.ndarray:
        return factor * (c1 * values.real + c2 * values.imag)

    gradient = geometry.gradient_from_partials(frame, xi, theta, combine(dq_xi), combine(dq_theta))
    return combine(q), gradient


# endregion Leading-order formulas

# region Image line charges
def image_charge_system(frame: BipolarFrame, k: float, formula: ImageFormula = "v") -> ImageChargeSystem:
    """
    v: -r_*^2 tau with the charges on [alpha, c_i];  v_alt: -r_*^2 tau on [-c_i, -alpha];
    u: +r_*^2 tau on [-c_i, -alpha];                 u_alt: -r_*^2 tau on [alpha, c_i].
    """
    t = tau(k)
    branch = ChargeBranch.PLUS if formula in ("v", "u_alt") else ChargeBranch.MINUS
    sign = 1.0 if formula == "u" else -1.0
    return ImageChargeSystem(
        alpha=frame.alpha,
        c_i=frame.c_i,
        xi_i=frame.xi_i,
        beta=beta(frame, k),
        branch=branch,
        prefactor=sign * frame.r_star ** 2 * t,
    )


def image_density(system: ImageChargeSystem, s) -> Tuple[np.ndarray, np.ndarray]:
    """
    (phi, psi) at s. On the plus branch
        phi(s) = 2 alpha beta e^{2 beta xi_i} (s - alpha)^(beta - 1) / (s + alpha)^(beta + 1),
        psi(s) = e^{2 beta xi_i} ((s - alpha) / (s + alpha))^beta,  alpha < s <= c_i,
    and phi_-(s) = -phi_+(-s), psi_-(s) = -psi_+(-s).
    """
    s = np.asarray(s, dtype=float)
    mirrored = system.sign * s
    a, b = system.alpha, system.beta
    if np.any(mirrored <= a) or np.any(mirrored > system.c_i * (1.0 + 1e-15)):
        raise DomainError("image density evaluated outside its support")
    if b < 1.0:
        logger.debug(f"{b=} < 1: phi has an integrable singularity at the inner endpoint")
    log_ratio = np.log(mirrored - a) - np.log(mirrored + a)
    psi = np.exp(2.0 * b * system.xi_i + b * log_ratio)
    phi = 2.0 * a * b * np.exp(2.0 * b * system.xi_i + (b - 1.0) * np.log(mirrored - a) - (b + 1.0) * np.log(mirrored + a))
    return system.sign * phi, system.sign * psi


def total_charge(system: ImageChargeSystem) -> float:
    """
    int phi ds over the support, with s = alpha + (c_i - alpha) w^(1/beta) on the plus
    branch so the endpoint singularity disappears.
    """
    a, b, c = system.alpha, system.beta, system.c_i

    def integrand(w: float) -> float:
        s = a + (c - a) * w ** (1.0 / b)
        return 2.0 * a * math.exp(2.0 * b * system.xi_i + b * math.log(c - a) - (b + 1.0) * math.log(s + a))

    value, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    return system.sign * value


def image_integrals(system: ImageChargeSystem, z) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    int ln|x - s| phi ds and int (d/dx2 ln|x - s|) psi ds with their gradients (packed complex).
    The substitution s = +-alpha coth(xi_i + eta) turns phi ds into 2 beta e^{-2 beta eta} d eta.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    lo, hi = sorted(system.support)
    if np.any((np.abs(z.imag) == 0.0) & (z.real >= lo) & (z.real <= hi)):
        raise DomainError("image potential evaluated on the charge support")
    a, b, sign = system.alpha, system.beta, system.sign
    n = z.size
    eta_max = 21.0 / b

    def integrand(eta: float) -> np.ndarray:
        u = system.xi_i + eta
        s = sign * a / math.tanh(u)
        phi_weight = sign * 2.0 * b * math.exp(-2.0 * b * eta)
        psi_weight = sign * math.exp(-2.0 * b * eta) * a / math.sinh(u) ** 2
        d = z - s
        r2 = d.real ** 2 + d.imag ** 2
        log_kernel = 0.5 * np.log(r2)
        log_gradient = d / r2
        dipole = d.imag / r2
        dipole_gradient = (-2.0 * d.imag * d.real + 1j * (d.real ** 2 - d.imag ** 2)) / r2 ** 2
        return np.concatenate([
            phi_weight * log_kernel,
            phi_weight * log_gradient.real,
            phi_weight * log_gradient.imag,
            psi_weight * dipole,
            psi_weight * dipole_gradient.real,
            psi_weight * dipole_gradient.imag,
        ])

    result, error = integrate.quad_vec(integrand, 0.0, eta_max, epsabs=_IMAGE_EPSABS, epsrel=_IMAGE_EPSREL,
                                       norm="max", limit=20000)
    logger.debug(f"{n=}; {error=}")
    parts = result.reshape(6, n)
    return parts[0], parts[1] + 1j * parts[2], parts[3], parts[4] + 1j * parts[5]


def image_field_array(system: ImageChargeSystem, z, c1: float, c2: float) -> Tuple[np.ndarray, np.ndarray]:
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if c1 == 0.0 and c2 == 0.0:
        return np.zeros(z.shape), np.zeros(z.shape, dtype=complex)
    log_value, log_gradient, dipole_value, dipole_gradient = image_integrals(system, z)
    value = system.prefactor * (c1 * log_value + c2 * dipole_value)
    gradient = system.prefactor * (c1 * log_gradient + c2 * dipole_gradient)
    return value, gradient


def image_potential(system: ImageChargeSystem, x: CartesianPoint, c1: float, c2: float) -> float:
    value, _ = image_field_array(system, x.z, c1, c2)
    return float(value[0])


def image_potential_gradient(system: ImageChargeSystem, x: CartesianPoint, c1: float, c2: float) -> Tuple[float, float]:
    _, gradient = image_field_array(system, x.z, c1, c2)
    return float(gradient[0].real), float(gradient[0].imag)


def lerch_image_remainder(frame: BipolarFrame, k: float, xi, theta) -> np.ndarray:
    """
    |grad r_+| where L(e^{-(2 xi_i - xi) - i theta}) = int ln|x - s| phi_+ ds + i int (d/dx2 ln|x - s|) psi_+ ds + r_+.
    """
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(theta, dtype=float))
    _check_shell(frame, xi)
    system = image_charge_system(frame, k, "v")
    kernel = kernel_P(np.exp(-(2.0 * frame.xi_i - xi) - 1j * theta), system.beta)
    grad_real = geometry.gradient_from_partials(frame, xi, theta, -kernel.real, -kernel.imag)
    grad_imag = geometry.gradient_from_partials(frame, xi, theta, -kernel.imag, kernel.real)
    z = geometry.z_array(frame, xi, theta)
    _, log_gradient, _, dipole_gradient = image_integrals(system, z)
    return np.hypot(np.abs(grad_real - log_gradient.reshape(xi.shape)),
                    np.abs(grad_imag - dipole_gradient.reshape(xi.shape)))


# endregion Image line charges

# region Boundary profiles
def boundary_profile(
        frame: BipolarFrame,
        k: float,
        field: HarmonicDiskField,
        kind: BoundaryKind,
        side: Side = Side.OUTER,
        n_theta: int = DEFAULT_PROFILE_POINTS,
        cfg: Optional[ReflectionSeriesConfig] = None,
        tol: float = DEFAULT_TOL,
        cross_check: bool = True,
) -> BoundaryProfile:
    sol = solve_modes(frame, k, field, kind, tol=tol)
    exact = eval_level(sol, frame.xi_i, n_theta, side)

    solver_gap = 0.0
    if cross_check:
        series = reflection_array(frame, k, field, kind, exact.xi, exact.theta, cfg, side)
        scale = max(1.0, float(np.max(np.abs(exact.gradient))))
        solver_gap = float(np.max(np.abs(series.gradient - exact.gradient))) / scale
        if solver_gap > 1e-8:
            logger.warning(f"spectral and reflection traces differ by {solver_gap=}")

    c1, c2 = extract_C1C2(field)
    primary = np.zeros(n_theta)
    alternative = np.zeros(n_theta)
    if not _is_trivial(tau(k), c1, c2):
        formulas = ("v", "v_alt") if kind is BoundaryKind.DIRICHLET else ("u", "u_alt")
        e_xi, e_theta = geometry.basis_array(frame, exact.xi, exact.theta)
        direction = e_xi if kind is BoundaryKind.DIRICHLET else e_theta
        columns = []
        for formula in formulas:
            if formula == "u_alt" and side is Side.INNER:
                columns.append(np.full(n_theta, np.nan))
                continue
            _, gradient = image_field_array(image_charge_system(frame, k, formula), exact.z, c1, c2)
            columns.append((gradient * np.conj(direction)).real)
        primary, alternative = columns

    logger.debug(f"{kind=}; {side=}; {n_theta=}; {solver_gap=}")
    return BoundaryProfile(
        kind=kind,
        side=side,
        theta=exact.theta,
        exact_xi=exact.grad_xi,
        exact_theta=exact.grad_theta,
        asym_primary=primary,
        asym_alternative=alternative,
        solver_gap=solver_gap,
    )


# endregion Boundary profiles

# region Rate sweeps
def shell_levels(frame: BipolarFrame) -> np.ndarray:
    """
    Levels from xi_e to xi_i, graded geometrically toward both boundaries.
    """
    graded = _GRADING ** np.arange(2, _SHELL_GRADED_LEVELS + 2)
    fractions = np.unique(np.concatenate([[0.0, 0.5, 1.0], graded, 1.0 - graded]))
    return frame.xi_e + frame.xi_gap * fractions


def core_levels(frame: BipolarFrame) -> np.ndarray:
    """
    xi_i and levels xi_i + gap * 2^j, from 2^-6 gap up to an offset of 2 into the inclusion.
    """
    offsets = [0.0]
    offset = _CORE_FINEST * frame.xi_gap
    while offset < _CORE_DEEPEST:
        offsets.append(offset)
        offset /= _GRADING
    offsets.append(_CORE_DEEPEST)
    return frame.xi_i + np.asarray(offsets)


def sweep_theta_grid(n_theta: int = DEFAULT_SWEEP_POINTS) -> np.ndarray:
    """
    theta_j = pi cos(pi (j + 1/2) / n), clustered toward theta = +-pi. The far side of
    the outer disk is squeezed into a window of width about xi_i there, while the gap
    at theta = 0 only needs the mid-grid spacing of about pi^2 / n.
    """
    if n_theta < 2:
        raise DomainError(f"{n_theta=} must be at least 2")
    return np.pi * np.cos(np.pi * (np.arange(n_theta) + 0.5) / n_theta)


def directional_norms(sol: BipolarModeSolution, n_theta: int = DEFAULT_SWEEP_POINTS) -> Tuple[Dict[str, float], List[str]]:
    """
    Sup-norms of grad . e_xi and grad . e_theta of the total field over the
    inclusion and over the shell, sampled on graded level curves at the
    ``sweep_theta_grid`` angles by direct summation.
    """
    frame = sol.frame
    theta = sweep_theta_grid(n_theta)
    norms = {name: 0.0 for name in NORM_NAMES}
    norms["core_total"] = 0.0
    norms["shell_total"] = 0.0
    peaks: Dict[str, np.ndarray] = {}
    for region, levels, side in (("core", core_levels(frame), Side.INNER), ("shell", shell_levels(frame), Side.OUTER)):
        for level in levels:
            samples = eval_mode_array(sol, np.full(theta.shape, level), theta, side)
            for component, values in (("xi", samples.grad_xi), ("theta", samples.grad_theta),
                                      ("total", np.abs(samples.gradient))):
                name = f"{region}_{component}"
                level_max = float(np.max(np.abs(values)))
                if level_max >= norms[name]:
                    norms[name] = level_max
                    peaks[name] = np.abs(values)

    warnings = []
    for name in NORM_NAMES:
        peak = peaks.get(name)
        if peak is None or norms[name] == 0.0:
            continue
        width = int(np.count_nonzero(peak >= 0.5 * norms[name]))
        if width < _PEAK_MIN_POINTS:
            warnings.append(f"{name}: peak spans {width} grid points at eps={frame.eps}; increase n_theta")
    if sol.truncated:
        warnings.append(f"mode count capped at eps={frame.eps}; truncation estimate {sol.truncation_estimate:.3g}")
    for message in warnings:
        logger.warning(message)
    return norms, warnings


@in_separate_thread(daemon=True)
def _measure_in_thread(frame, k, field, kind, n_theta, tol):
    return directional_norms(solve_modes(frame, k, field, kind, tol=tol), n_theta)


def _fit(eps: Sequence[float], values: Sequence[float]) -> Tuple[float, Tuple[float, float]]:
    x = np.log(np.asarray(eps))
    y = np.log(np.maximum(np.asarray(values), 1e-300))
    fit = stats.linregress(x, y)
    if len(x) < 3:
        return float(fit.slope), (math.nan, math.nan)
    half = stats.t.ppf(0.975, len(x) - 2) * fit.stderr
    return float(fit.slope), (float(fit.slope - half), float(fit.slope + half))


def classify(pattern: Dict[str, bool]) -> str:
    observed = tuple(pattern[name] for name in NORM_NAMES)
    for row, expected in TABLE_ROWS.items():
        if observed == expected:
            return row
    return "unmatched"


def rate_sweep(
        r_i: float,
        r_e: float,
        eps_list: Sequence[float],
        k_list: Sequence[float],
        data: FourierBoundaryData,
        solution: Optional[SolutionName] = None,
        n_theta: int = DEFAULT_SWEEP_POINTS,
        threads: int = 1,
        tol: float = DEFAULT_TOL,
) -> BlowUpReport:
    if len(eps_list) != len(k_list):
        raise DomainError("eps and k schedules must have the same length")
    if len(eps_list) < 2:
        raise DomainError("a rate sweep needs at least two points")
    warnings: List[str] = []
    if len(eps_list) < 3:
        warnings.append("two sweep points: slope intervals are undefined")
        logger.warning(warnings[-1])
    kind = data.kind
    if solution is None:
        solution = "u" if kind is BoundaryKind.NEUMANN else "v"

    field = harmonic_extension(data)
    c1, c2 = extract_C1C2(field)
    frames = [geometry.derive_frame(DiskPairGeometry(r_i=r_i, r_e=r_e, eps=eps)) for eps in eps_list]
    calls = [(frame, k, field, kind, n_theta, tol) for frame, k in zip(frames, k_list)]
    results = collect_in_batches(_measure_in_thread, calls, threads)

    names = list(NORM_NAMES) + ["core_total", "shell_total"]
    norms = {name: [result[0][name] for result in results] for name in names}
    for _, point_warnings in results:
        warnings.extend(point_warnings)

    slopes, intervals, growth, variation, pattern = {}, {}, {}, {}, {}
    for name in names:
        values = np.asarray(norms[name])
        slopes[name], intervals[name] = _fit(eps_list, values)
        growth[name] = (values[1:] / np.maximum(values[:-1], 1e-300)).tolist()
        variation[name] = float(np.max(values) / max(float(np.min(values)), 1e-300))
    for name in NORM_NAMES:
        pattern[name] = variation[name] >= BOUNDED_VARIATION and norms[name][-1] > norms[name][0]

    report = BlowUpReport(
        solution=solution,
        kind=kind,
        eps=list(eps_list),
        k=list(k_list),
        c1=c1,
        c2=c2,
        norms=norms,
        slopes=slopes,
        slope_intervals=intervals,
        growth_factors=growth,
        variation=variation,
        pattern=pattern,
        row=classify(pattern),
        warnings=warnings,
    )
    logger.info(f"{solution=}; {report.row=}; {variation=}")
    return report


def sandwich_ratios(report: BlowUpReport) -> List[float]:
    """
    sup |grad v| (1/k + sqrt(eps)) / (|C1| + |C2|) per sweep point; bounded above and
    below by one constant when the upper bound is attained.
    """
    scale = abs(report.c1) + abs(report.c2)
    if scale == 0.0:
        raise DomainError("the sandwich needs (C1, C2) != (0, 0)")
    return [
        norm * (1.0 / k + math.sqrt(eps)) / scale
        for norm, k, eps in zip(report.norms["shell_total"], report.k, report.eps)
    ]


def singular_remainder_norm(sol: BipolarModeSolution, c1: float, c2: float,
                            n_theta: int = DEFAULT_SWEEP_POINTS) -> float:
    """
    Sup over the shell (and over the inclusion for Neumann data) of
    |grad (w - (r_*^2 tau / 2)[C1 Re q + C2 Im q])|; the boundary itself is excluded.
    """
    frame = sol.frame
    levels = [(level, Side.OUTER) for level in shell_levels(frame)[1:-1]]
    if sol.kind is BoundaryKind.NEUMANN:
        levels += [(level, Side.INNER) for level in core_levels(frame)[1:]]
    theta = sweep_theta_grid(n_theta)
    worst = 0.0
    for level, side in levels:
        samples = eval_mode_array(sol, np.full(theta.shape, level), theta, side)
        _, singular = singular_part_array(frame, sol.k, c1, c2, samples.xi, samples.theta, sol.kind)
        worst = max(worst, float(np.max(np.abs(samples.gradient - singular))))
    return worst
# endregion Rate sweeps
