"""
Repeated-reflection representation of the transmission solutions.

Reflection across a level circle {xi = xi0} is xi -> 2 xi0 - xi, and the
composition of the reflections across the inclusion boundary and the outer
boundary is the shift xi -> xi + 2 (xi_i - xi_e). Every term of the series is
therefore the translated background field H~ evaluated at a shifted bipolar
point, and its gradient follows from the chain rule with the factor
h(xi, theta) / h(xi', theta).
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, validator

from . import geometry
from .boundary_data import gradient_array, value_array
from .errors import DomainError
from .objs.field_objs import BoundaryKind, FieldSamples, HarmonicDiskField, Side
from .objs.geometry_objs import (
    BipolarFrame,
    BipolarPoint,
    CartesianPoint,
    Circle,
    GradientSample,
)

logger = logging.getLogger(__name__)

DEFAULT_QUADRATURE_POINTS = 2048


def tau(k: float) -> float:
    if not k > 0.0:
        raise DomainError(f"conductivity ratio must be positive, got {k=}")
    return (k - 1.0) / (k + 1.0)


def beta(frame: BipolarFrame, k: float) -> float:
    """
    r_* (-ln|tau|) / (4 sqrt(eps)); |tau| is used for k < 1 as well.
    """
    t = tau(k)
    if t == 0.0:
        raise DomainError("beta is infinite for k = 1")
    return frame.r_star * (-math.log(abs(t))) / (4.0 * math.sqrt(frame.eps))


# region Models
class ReflectionSeriesConfig(BaseModel):
    tol: float = 1e-13
    n_max: int = 1_000_000

    class Config:
        frozen = True

    @validator("tol")
    def _positive_tol(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("tol must be positive")
        return value

    @validator("n_max")
    def _positive_n_max(cls, value: int) -> int:
        if value < 1:
            raise ValueError("n_max must be at least 1")
        return value


class ReflectionLadder(BaseModel):
    xi_i: float
    xi_e: float
    xi_gap: float

    class Config:
        frozen = True

    @classmethod
    def from_frame(cls, frame: BipolarFrame) -> "ReflectionLadder":
        return cls(xi_i=frame.xi_i, xi_e=frame.xi_e, xi_gap=frame.xi_gap)

    def inner(self, n) -> np.ndarray:
        return 2.0 * np.asarray(n) * self.xi_gap + self.xi_i

    def outer(self, n) -> np.ndarray:
        return 2.0 * np.asarray(n) * self.xi_gap + self.xi_e

    def is_ordered(self, n_max: int) -> bool:
        n = np.arange(n_max + 1)
        return bool(np.all(self.inner(n) >= self.xi_i) and np.all(self.outer(n + 1) >= self.xi_i))


# endregion Models

# region Series terms
# a reflected term is (sign of xi, shift, sign of the term): H~(sign * xi + shift, theta)
_Term = Tuple[float, float, float]


def _terms(ladder: ReflectionLadder, kind: BoundaryKind, core: bool, m: int) -> List[_Term]:
    near = 2.0 * m * ladder.xi_gap
    far = 2.0 * (m + 1) * ladder.xi_gap
    if kind is BoundaryKind.NEUMANN:
        if core:
            return [(1.0, near, 1.0), (1.0, far, 1.0)]
        return [(-1.0, 2.0 * ladder.xi_i + near, 1.0), (1.0, far, 1.0)]
    if core:
        return [(1.0, far, 1.0), (1.0, near, -1.0)]
    return [(1.0, far, 1.0), (-1.0, 2.0 * ladder.xi_i + near, -1.0)]


def _term_coefficient(kind: BoundaryKind, t: float, m: int) -> float:
    if kind is BoundaryKind.NEUMANN:
        return (-t) ** (m + 1)
    return t ** (m + 1)


def _shifted_partials(frame: BipolarFrame, background: HarmonicDiskField, xi_shifted: np.ndarray,
                      theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Value and (dH~/dxi', dH~/dtheta) at the shifted points.
    """
    z = geometry.z_array(frame, xi_shifted, theta)
    with np.errstate(over="ignore"):
        h = geometry.scale_factor_array(frame, xi_shifted, theta)
    g_xi, g_theta = geometry.project_gradient(frame, xi_shifted, theta, gradient_array(background, z))
    return value_array(background, z), g_xi / h, g_theta / h


def _h_ratio(xi: np.ndarray, theta: np.ndarray, shift: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.max((np.cosh(xi) + np.cos(theta)) / (np.cosh(xi + shift) + np.cos(theta))))


# endregion Series terms

def reflection_array(
        frame: BipolarFrame,
        k: float,
        field: HarmonicDiskField,
        kind: BoundaryKind,
        xi,
        theta,
        cfg: Optional[ReflectionSeriesConfig] = None,
        side: Optional[Side] = None,
) -> FieldSamples:
    """
    Sum the reflection series at bipolar points. The background ``field`` is
    the untranslated H (or H_d); it is translated by x_0 here.
    """
    cfg = cfg or ReflectionSeriesConfig()
    t = tau(k)
    ladder = ReflectionLadder.from_frame(frame)
    background = field.translated(frame.x_0)
    xi, theta = np.broadcast_arrays(np.asarray(xi, dtype=float), geometry.normalize_angle_array(theta))
    xi, theta = xi.ravel().copy(), theta.ravel().copy()
    core = geometry.core_mask(frame, xi, side)

    z = geometry.z_array(frame, xi, theta)
    h = geometry.scale_factor_array(frame, xi, theta)
    value = value_array(background, z)
    d_xi = np.zeros(xi.shape)
    d_theta = np.zeros(xi.shape)
    bound_scale = 2.0 * background.gradient_bound()

    previous = math.inf
    tail = 0.0
    terms = 0
    truncated = False
    for m in range(cfg.n_max):
        coefficient = _term_coefficient(kind, t, m)
        if coefficient == 0.0:
            break
        step_xi = np.zeros(xi.shape)
        step_theta = np.zeros(xi.shape)
        for region_core in (False, True):
            mask = core == region_core
            if not np.any(mask):
                continue
            for sign, shift, term_sign in _terms(ladder, kind, region_core, m):
                shifted = sign * xi[mask] + shift
                term_value, g_xi, g_theta = _shifted_partials(frame, background, shifted, theta[mask])
                value[mask] += coefficient * term_sign * term_value
                step_xi[mask] += coefficient * term_sign * sign * g_xi
                step_theta[mask] += coefficient * term_sign * g_theta
        d_xi += step_xi
        d_theta += step_theta
        terms = m + 1

        size = float(np.max(h * np.hypot(step_xi, step_theta)))
        tail = bound_scale * abs(t) ** (m + 2) / (1.0 - abs(t)) * _h_ratio(xi, theta, 2.0 * (m + 1) * ladder.xi_gap)
        if tail < cfg.tol:
            break
        ratio = size / previous if previous > 0.0 else 0.0
        previous = size
        if m >= 16 and ratio < 1.0:
            estimate = size * ratio / (1.0 - ratio)
            if estimate < 0.1 * cfg.tol:
                tail = estimate
                break
    else:
        truncated = True
        logger.warning(f"reflection series reached {cfg.n_max=} terms; {tail=}")

    gradient = gradient_array(background, z) + geometry.gradient_from_partials(frame, xi, theta, d_xi, d_theta)
    grad_xi, grad_theta = geometry.project_gradient(frame, xi, theta, gradient)
    logger.debug(f"{kind=}; {k=}; {terms=}; {tail=}")
    return FieldSamples(
        xi=xi,
        theta=theta,
        z=z,
        value=value,
        gradient=gradient,
        grad_xi=grad_xi,
        grad_theta=grad_theta,
        terms=terms,
        tail_estimate=tail,
        truncated=truncated,
    )


def reflection_points(frame: BipolarFrame, k: float, field: HarmonicDiskField, kind: BoundaryKind, z,
                      cfg: Optional[ReflectionSeriesConfig] = None, side: Optional[Side] = None) -> FieldSamples:
    xi, theta = geometry.bipolar_array(frame, z)
    return reflection_array(frame, k, field, kind, np.atleast_1d(xi), np.atleast_1d(theta), cfg, side)


def _sample(frame, k, field, kind, p, cfg, side) -> GradientSample:
    samples = reflection_array(frame, k, field, kind, [p.xi], [p.theta], cfg, side)
    gradient = complex(samples.gradient[0])
    return GradientSample(
        point=CartesianPoint.from_complex(complex(samples.z[0])),
        bipolar=p,
        value=float(samples.value[0]),
        gradient=(gradient.real, gradient.imag),
        grad_xi=float(samples.grad_xi[0]),
        grad_theta=float(samples.grad_theta[0]),
        terms=samples.terms,
        truncated=samples.truncated,
    )


def solve_u_reflection(frame: BipolarFrame, k: float, H: HarmonicDiskField, p: BipolarPoint,
                       cfg: Optional[ReflectionSeriesConfig] = None, side: Optional[Side] = None) -> GradientSample:
    return _sample(frame, k, H, BoundaryKind.NEUMANN, p, cfg, side)


def solve_v_reflection(frame: BipolarFrame, k: float, H_d: HarmonicDiskField, p: BipolarPoint,
                       cfg: Optional[ReflectionSeriesConfig] = None, side: Optional[Side] = None) -> GradientSample:
    return _sample(frame, k, H_d, BoundaryKind.DIRICHLET, p, cfg, side)


# region Layer potentials
def _normal_derivative(frame: BipolarFrame, background: HarmonicDiskField, xi: np.ndarray,
                       theta: np.ndarray) -> np.ndarray:
    """
    dH~/dnu on a level circle, nu = -e_xi the outward normal.
    """
    z = geometry.z_array(frame, xi, theta)
    g_xi, _ = geometry.project_gradient(frame, xi, theta, gradient_array(background, z))
    return -g_xi


def density_series(frame: BipolarFrame, k: float, H: HarmonicDiskField, side: Side, theta,
                   cfg: Optional[ReflectionSeriesConfig] = None) -> np.ndarray:
    """
    Single-layer densities on the inclusion boundary (INNER) and the outer boundary (OUTER)
    for the Neumann problem with background H:

        phi_i = 2 tau sum_n (-tau)^n h(xi_i) / h(xi_{i,n}) dH~/dnu(xi_{i,n})
        phi_e = -2 g~ + 2 tau sum_n (-tau)^n h(xi_e) / h(xi_{e,n+1}) dH~/dnu(xi_{e,n+1})

    Both are the jumps of the normal derivative of u, continued outside the outer disk by
    its reflection across the outer boundary; each has zero mean over its circle.
    """
    cfg = cfg or ReflectionSeriesConfig()
    t = tau(k)
    ladder = ReflectionLadder.from_frame(frame)
    background = H.translated(frame.x_0)
    theta = geometry.normalize_angle_array(theta)
    level = frame.xi_i if side is Side.INNER else frame.xi_e
    xi = np.full(theta.shape, level)
    h = geometry.scale_factor_array(frame, xi, theta)
    bound_scale = 2.0 * background.gradient_bound()

    if side is Side.INNER:
        density = np.zeros(theta.shape)
        offset = 0
    else:
        density = -2.0 * _normal_derivative(frame, background, xi, theta)
        offset = 1
    if t == 0.0:
        return density

    for n in range(cfg.n_max):
        shifted = (ladder.inner(n) if side is Side.INNER else ladder.outer(n + offset)) * np.ones(theta.shape)
        with np.errstate(over="ignore"):
            ratio = h / geometry.scale_factor_array(frame, shifted, theta)
        density += 2.0 * t * (-t) ** n * ratio * _normal_derivative(frame, background, shifted, theta)
        tail = bound_scale * abs(t) ** (n + 1) / (1.0 - abs(t)) * float(np.max(ratio))
        if tail < cfg.tol:
            break
    else:
        logger.warning(f"density series reached {cfg.n_max=} terms")
    return density


def single_layer(circle: Circle, density: np.ndarray, z) -> Tuple[np.ndarray, np.ndarray]:
    """
    S[phi](x) = (1/2pi) int ln|x - y| phi(y) ds(y) and its gradient by the periodic
    trapezoid rule; ``density`` is sampled at the angles 2 pi j / M about the centre.
    """
    density = np.asarray(density, dtype=float)
    m = density.size
    nodes = circle.center_z + circle.radius * np.exp(2j * np.pi * np.arange(m) / m)
    weights = density * circle.radius / m
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    diff = z[:, None] - nodes[None, :]
    if np.any(np.abs(diff) == 0.0):
        raise DomainError("single layer evaluated on a quadrature node")
    value = np.log(np.abs(diff)) @ weights
    gradient = (1.0 / np.conj(diff)) @ weights
    return value, gradient


def circle_nodes(circle: Circle, m: int) -> np.ndarray:
    return circle.center_z + circle.radius * np.exp(2j * np.pi * np.arange(m) / m)


def reconstruct_from_densities(frame: BipolarFrame, k: float, H: HarmonicDiskField, z,
                               cfg: Optional[ReflectionSeriesConfig] = None,
                               n_quad: int = DEFAULT_QUADRATURE_POINTS) -> Tuple[np.ndarray, np.ndarray]:
    """
    u = S_{dB_i}[phi_i] + S_{dB_e}[phi_e], up to an additive constant.
    """
    value = 0.0
    gradient = 0.0
    for side, level in ((Side.INNER, frame.xi_i), (Side.OUTER, frame.xi_e)):
        circle = geometry.level_circle(frame, level)
        _, theta = geometry.bipolar_array(frame, circle_nodes(circle, n_quad))
        layer_value, layer_gradient = single_layer(circle, density_series(frame, k, H, side, theta, cfg), z)
        value = value + layer_value
        gradient = gradient + layer_gradient
    return value, gradient


def disk_layer_identity_check(disk: Circle, v: HarmonicDiskField, x: CartesianPoint, n_quad: int = 512) -> float:
    """
    |S_dB[dv/dnu](x) - closed form|, where the closed form is -v(x)/2 + v(c)/2
    inside the disk and -v(R x)/2 + v(c)/2 outside, R the reflection across dB.
    """
    if v.center != disk.center or v.radius != disk.radius:
        raise DomainError("the test polynomial must be expanded about the disk")
    nodes = circle_nodes(disk, n_quad)
    normal = (nodes - disk.center_z) / disk.radius
    flux = (gradient_array(v, nodes) * np.conj(normal)).real
    layer, _ = single_layer(disk, flux, x.z)
    offset = x.z - disk.center_z
    distance = abs(offset)
    if abs(distance - disk.radius) <= 1e-12 * disk.radius:
        raise DomainError("the identity is checked off the circle")
    target = x.z if distance < disk.radius else disk.center_z + disk.radius ** 2 / np.conj(offset)
    closed_form = -0.5 * float(value_array(v, target)) + 0.5 * v.offset
    return abs(float(layer[0]) - closed_form)


# endregion Layer potentials

# region Diagnostics
def inclusion_ratio_sums(frame: BipolarFrame, theta, n_terms: Optional[int] = None) -> np.ndarray:
    """
    sum_{m <= N} h(xi_i, theta) / h(xi_{i,m}, theta) with N = r_* / sqrt(eps) by default.
    """
    ladder = ReflectionLadder.from_frame(frame)
    if n_terms is None:
        n_terms = int(frame.r_star / math.sqrt(frame.eps))
    theta = np.asarray(theta, dtype=float)
    levels = ladder.inner(np.arange(n_terms + 1))
    with np.errstate(over="ignore"):
        ratios = (math.cosh(frame.xi_i) + np.cos(theta)[..., None]) / (np.cosh(levels) + np.cos(theta)[..., None])
    return ratios.sum(axis=-1)


def inclusion_ratio_constant(frame: BipolarFrame, n_theta: int = 512) -> float:
    """
    max over pi/2 < |theta| <= pi of the ratio sums times |x(xi_i, theta)|.
    """
    theta = np.linspace(0.5 * np.pi, np.pi, n_theta + 1)[1:]
    z = geometry.z_array(frame, np.full(theta.shape, frame.xi_i), theta)
    return float(np.max(inclusion_ratio_sums(frame, theta) * np.abs(z)))
# endregion Diagnostics
