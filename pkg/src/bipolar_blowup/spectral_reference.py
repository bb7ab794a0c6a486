"""
Exact transmission solver in bipolar Fourier modes.

The total field is H~ + w, H~ the background field translated by x_0. Per
mode n and parity (cos, sin) the scattered field is

    shell (xi_e < xi < xi_i): a e^{n(xi - xi_i)} + b e^{-n(xi - xi_e)}
    core  (xi > xi_i):        s e^{-n(xi - xi_i)}

and (a, b, s) solve value continuity and the flux jump at xi_i together with
the outer condition at xi_e. Both exponentials are at most 1 in their region,
so no mode overflows however large n is.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from . import geometry
from .boundary_data import gradient_array, value_array
from .errors import DomainError, SolverError
from .objs.field_objs import (
    BipolarModeSolution,
    BoundaryKind,
    FieldSamples,
    HarmonicDiskField,
    LinearBipolarExpansion,
    Side,
)
from .objs.geometry_objs import BipolarFrame, BipolarPoint, CartesianPoint, GradientSample
from .reflection_solver import tau

logger = logging.getLogger(__name__)

DEFAULT_N_MODES = 64
MODE_CAP = 20000
DEFAULT_TOL = 1e-12
_MODE_MARGIN = 16
_CHUNK_ELEMENTS = 2_000_000


def linear_bipolar_expansion(frame: BipolarFrame, n_modes: int = DEFAULT_N_MODES) -> LinearBipolarExpansion:
    """
    x1 = alpha [1 + 2 sum (-1)^n e^{-n xi} cos(n theta)], x2 = -2 alpha sum (-1)^n e^{-n xi} sin(n theta).
    """
    sign = (-1.0) ** np.arange(1, n_modes + 1)
    return LinearBipolarExpansion(
        x1_const=frame.alpha,
        x1_cos=tuple((2.0 * frame.alpha * sign).tolist()),
        x2_sin=tuple((-2.0 * frame.alpha * sign).tolist()),
    )


def mode_count(frame: BipolarFrame, k: float, tol: float = DEFAULT_TOL, n_min: int = DEFAULT_N_MODES,
               n_cap: int = MODE_CAP) -> Tuple[int, bool]:
    """
    Smallest N with |tau| e^{-N (xi_i - xi_e)} below tol, plus a fixed margin.
    """
    t = abs(tau(k))
    if t <= tol:
        return n_min, False
    needed = int(math.ceil(math.log(t / tol) / frame.xi_gap)) + _MODE_MARGIN
    if needed > n_cap:
        logger.warning(f"{needed=} modes exceed {n_cap=}; the solution is truncated")
        return n_cap, True
    return max(n_min, needed), False


def flux_data(frame: BipolarFrame, background: HarmonicDiskField, n_modes: int) -> Tuple[np.ndarray, float]:
    """
    Fourier coefficients of dH~/dxi on {xi = xi_i}: columns [cos, sin] for
    n = 1..n_modes and the mean, by trapezoid sampling and a real FFT.
    """
    m = 1 << max(6, int(math.ceil(math.log2(4 * n_modes + 1))))
    theta = 2.0 * np.pi * np.arange(m) / m
    xi = np.full(m, frame.xi_i)
    z = geometry.z_array(frame, xi, theta)
    grad = gradient_array(background, z)
    dz = geometry.dz_dxi_array(frame, xi, theta)
    samples = (np.conj(grad) * dz).real
    spectrum = np.fft.rfft(samples) / m
    data = np.empty((n_modes, 2))
    data[:, 0] = 2.0 * spectrum[1:n_modes + 1].real
    data[:, 1] = -2.0 * spectrum[1:n_modes + 1].imag
    logger.debug(f"{m=}; {n_modes=}")
    return data, float(spectrum[0].real)


def mode_matrices(frame: BipolarFrame, k: float, kind: BoundaryKind, n_modes: int) -> np.ndarray:
    """
    Rows: continuity at xi_i, flux jump at xi_i divided by n, outer condition at xi_e.
    """
    n = np.arange(1, n_modes + 1, dtype=float)
    decay = np.exp(-n * frame.xi_gap)
    outer_sign = 1.0 if kind is BoundaryKind.DIRICHLET else -1.0
    matrices = np.zeros((n_modes, 3, 3))
    matrices[:, 0, 0] = 1.0
    matrices[:, 0, 1] = decay
    matrices[:, 0, 2] = -1.0
    matrices[:, 1, 0] = 1.0
    matrices[:, 1, 1] = -decay
    matrices[:, 1, 2] = k
    matrices[:, 2, 0] = decay
    matrices[:, 2, 1] = outer_sign
    return matrices


def solve_modes(
        frame: BipolarFrame,
        k: float,
        field: HarmonicDiskField,
        kind: BoundaryKind,
        *,
        tol: float = DEFAULT_TOL,
        n_min: int = DEFAULT_N_MODES,
        n_cap: int = MODE_CAP,
) -> BipolarModeSolution:
    if not k > 0.0:
        raise DomainError(f"conductivity ratio must be positive, got {k=}")
    t = tau(k)
    background = field.translated(frame.x_0)
    n_modes, truncated = mode_count(frame, k, tol=tol, n_min=n_min, n_cap=n_cap)
    data, mean_flux = flux_data(frame, background, n_modes)

    n = np.arange(1, n_modes + 1, dtype=float)
    rhs = np.zeros((n_modes, 3, 2))
    rhs[:, 1, :] = (k - 1.0) * data / n[:, None]
    try:
        coefficients = np.linalg.solve(mode_matrices(frame, k, kind, n_modes), rhs)
    except np.linalg.LinAlgError as err:
        raise SolverError(f"mode system is singular: {err}") from err
    if not np.all(np.isfinite(coefficients)):
        raise SolverError("mode system produced non-finite coefficients")

    shell_a0 = shell_b0 = core_s0 = 0.0
    if kind is BoundaryKind.DIRICHLET:
        shell_b0 = (k - 1.0) * mean_flux
        shell_a0 = -shell_b0 * frame.xi_e
        core_s0 = shell_a0 + shell_b0 * frame.xi_i

    last = float(np.max(np.abs(coefficients[-1])))
    truncation_estimate = 2.0 * n_modes * last * (math.cosh(frame.xi_i) + 1.0) / frame.alpha \
        / (1.0 - math.exp(-frame.xi_gap))
    logger.debug(f"{kind=}; {k=}; {n_modes=}; {mean_flux=}; {truncation_estimate=}")
    return BipolarModeSolution(
        frame=frame,
        kind=kind,
        k=k,
        tau=t,
        background=background,
        shell_a=coefficients[:, 0, :],
        shell_b=coefficients[:, 1, :],
        core_s=coefficients[:, 2, :],
        shell_a0=shell_a0,
        shell_b0=shell_b0,
        core_s0=core_s0,
        mean_flux_datum=mean_flux,
        truncation_estimate=truncation_estimate,
        truncated=truncated,
    )


# region Closed forms for linear background fields
def linear_dirichlet_coefficients(frame: BipolarFrame, k: float, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    A_n = -2 alpha (-1)^n tau / (1 - tau E_n^2), B_n = 2 alpha (-1)^n tau E_n^2 / (1 - tau E_n^2),
    E_n = e^{-n (xi_i - xi_e)}.
    """
    t = tau(k)
    n = np.arange(1, n_max + 1, dtype=float)
    e2 = np.exp(-2.0 * n * frame.xi_gap)
    sign = (-1.0) ** n
    a = -2.0 * frame.alpha * sign * t / (1.0 - t * e2)
    b = 2.0 * frame.alpha * sign * t * e2 / (1.0 - t * e2)
    return a, b


def linear_neumann_coefficients(frame: BipolarFrame, k: float, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    t = tau(k)
    n = np.arange(1, n_max + 1, dtype=float)
    e2 = np.exp(-2.0 * n * frame.xi_gap)
    sign = (-1.0) ** n
    a = -2.0 * frame.alpha * sign * t / (1.0 + t * e2)
    b = -2.0 * frame.alpha * sign * t * e2 / (1.0 + t * e2)
    return a, b


def linear_mode_prediction(
        frame: BipolarFrame,
        k: float,
        kind: BoundaryKind,
        c1: float,
        c2: float,
        n_max: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    (shell_a, shell_b, core_s) in the scaled basis for the background C1 x1 + C2 x2.
    """
    if kind is BoundaryKind.DIRICHLET:
        a, b = linear_dirichlet_coefficients(frame, k, n_max)
    else:
        a, b = linear_neumann_coefficients(frame, k, n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    parity = np.array([c1, -c2])
    shell_a = np.outer(a * np.exp(-n * frame.xi_i), parity)
    shell_b = np.outer(b * np.exp(-n * frame.xi_e), parity)
    core_s = np.outer((a + b) * np.exp(-n * frame.xi_i), parity)
    return shell_a, shell_b, core_s


# endregion Closed forms for linear background fields

# region Evaluation
def _level_coefficients(sol: BipolarModeSolution, xi0: float, core: bool) -> Tuple[np.ndarray, np.ndarray]:
    """
    Value and d/dxi mode coefficients at the level xi0, columns [cos, sin].
    """
    n = sol.modes.astype(float)[:, None]
    frame = sol.frame
    if core:
        decay = np.exp(-n * (xi0 - frame.xi_i))
        return sol.core_s * decay, -n * sol.core_s * decay
    up = np.exp(n * (xi0 - frame.xi_i))
    down = np.exp(-n * (xi0 - frame.xi_e))
    value = sol.shell_a * up + sol.shell_b * down
    d_xi = n * (sol.shell_a * up - sol.shell_b * down)
    return value, d_xi


def _zero_mode(sol: BipolarModeSolution, xi, core) -> Tuple[np.ndarray, np.ndarray]:
    xi = np.asarray(xi, dtype=float)
    value = np.where(core, sol.core_s0, sol.shell_a0 + sol.shell_b0 * xi)
    d_xi = np.where(core, 0.0, sol.shell_b0)
    return value, d_xi


def _synthesize(coefficients: np.ndarray, theta0: float, n_theta: int) -> np.ndarray:
    """
    sum_n Re[(c_n - i s_n) e^{i n theta_j}] on theta_j = theta0 + 2 pi j / n_theta,
    modes folded modulo n_theta.
    """
    n = np.arange(1, coefficients.shape[0] + 1)
    weighted = (coefficients[:, 0] - 1j * coefficients[:, 1]) * np.exp(1j * n * theta0)
    spectrum = np.zeros(n_theta, dtype=complex)
    np.add.at(spectrum, n % n_theta, weighted)
    return (np.fft.ifft(spectrum) * n_theta).real


def _theta_derivative(coefficients: np.ndarray) -> np.ndarray:
    n = np.arange(1, coefficients.shape[0] + 1, dtype=float)[:, None]
    return n * np.column_stack([coefficients[:, 1], -coefficients[:, 0]])


def _assemble(sol: BipolarModeSolution, xi, theta, w, d_xi, d_theta) -> FieldSamples:
    frame = sol.frame
    z = geometry.z_array(frame, xi, theta)
    gradient = gradient_array(sol.background, z) + geometry.gradient_from_partials(frame, xi, theta, d_xi, d_theta)
    grad_xi, grad_theta = geometry.project_gradient(frame, xi, theta, gradient)
    return FieldSamples(
        xi=xi,
        theta=theta,
        z=z,
        value=value_array(sol.background, z) + w,
        gradient=gradient,
        grad_xi=grad_xi,
        grad_theta=grad_theta,
        terms=sol.n_modes,
        tail_estimate=sol.truncation_estimate,
        truncated=sol.truncated,
    )


def eval_level(sol: BipolarModeSolution, xi0: float, n_theta: int, side: Optional[Side] = None,
               theta0: Optional[float] = None) -> FieldSamples:
    """
    Solution on the level {xi = xi0} at n_theta uniform angles starting at theta0
    (default -pi + 2 pi / n_theta, so the grid covers (-pi, pi]).
    """
    if theta0 is None:
        theta0 = -math.pi + 2.0 * math.pi / n_theta
    theta = geometry.normalize_angle_array(theta0 + 2.0 * np.pi * np.arange(n_theta) / n_theta)
    xi = np.full(n_theta, float(xi0))
    core = bool(geometry.core_mask(sol.frame, np.array([xi0]), side)[0])
    value_coefficients, d_xi_coefficients = _level_coefficients(sol, xi0, core)
    w0, d_xi0 = _zero_mode(sol, xi0, core)
    w = _synthesize(value_coefficients, theta0, n_theta) + w0
    d_xi = _synthesize(d_xi_coefficients, theta0, n_theta) + d_xi0
    d_theta = _synthesize(_theta_derivative(value_coefficients), theta0, n_theta)
    return _assemble(sol, xi, theta, w, d_xi, d_theta)


def _direct_sums(sol: BipolarModeSolution, xi: np.ndarray, theta: np.ndarray, core: np.ndarray):
    frame = sol.frame
    n = sol.modes.astype(float)
    w = np.zeros(xi.shape)
    d_xi = np.zeros(xi.shape)
    d_theta = np.zeros(xi.shape)
    chunk = max(1, _CHUNK_ELEMENTS // sol.n_modes)
    for start in range(0, xi.size, chunk):
        sl = slice(start, start + chunk)
        x, t, c = xi[sl, None], theta[sl, None], core[sl, None]
        cos, sin = np.cos(n * t), np.sin(n * t)
        up = np.where(c, 0.0, np.exp(np.minimum(n * (x - frame.xi_i), 0.0)))
        down = np.where(c, np.exp(-n * np.maximum(x - frame.xi_i, 0.0)), np.exp(-n * np.maximum(x - frame.xi_e, 0.0)))
        first = np.where(c, 0.0, 1.0)
        b_cos = np.where(c, sol.core_s[:, 0], sol.shell_b[:, 0])
        b_sin = np.where(c, sol.core_s[:, 1], sol.shell_b[:, 1])
        a_cos = first * sol.shell_a[:, 0]
        a_sin = first * sol.shell_a[:, 1]
        value_cos = a_cos * up + b_cos * down
        value_sin = a_sin * up + b_sin * down
        w[sl] = np.sum(value_cos * cos + value_sin * sin, axis=1)
        d_xi[sl] = np.sum(n * ((a_cos * up - b_cos * down) * cos + (a_sin * up - b_sin * down) * sin), axis=1)
        d_theta[sl] = np.sum(n * (value_sin * cos - value_cos * sin), axis=1)
    return w, d_xi, d_theta


def eval_mode_array(sol: BipolarModeSolution, xi, theta, side: Optional[Side] = None) -> FieldSamples:
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), geometry.normalize_angle_array(theta))
    xi, theta = xi.ravel().copy(), theta.ravel().copy()
    core = geometry.core_mask(sol.frame, xi, side)
    w, d_xi, d_theta = _direct_sums(sol, xi, theta, core)
    w0, d_xi0 = _zero_mode(sol, xi, core)
    return _assemble(sol, xi, theta, w + w0, d_xi + d_xi0, d_theta)


def eval_mode_points(sol: BipolarModeSolution, z, side: Optional[Side] = None) -> FieldSamples:
    xi, theta = geometry.bipolar_array(sol.frame, z)
    return eval_mode_array(sol, np.atleast_1d(xi), np.atleast_1d(theta), side)


def eval_mode_solution(sol: BipolarModeSolution, frame: BipolarFrame, p: BipolarPoint,
                       side: Optional[Side] = None) -> GradientSample:
    if frame != sol.frame:
        raise DomainError("the frame does not match the one the solution was computed in")
    samples = eval_mode_array(sol, [p.xi], [p.theta], side)
    gradient = complex(samples.gradient[0])
    return GradientSample(
        point=CartesianPoint.from_complex(complex(samples.z[0])),
        bipolar=p,
        value=float(samples.value[0]),
        gradient=(gradient.real, gradient.imag),
        grad_xi=float(samples.grad_xi[0]),
        grad_theta=float(samples.grad_theta[0]),
        terms=sol.n_modes,
        truncated=sol.truncated,
    )
# endregion Evaluation
