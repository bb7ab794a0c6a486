"""
Translated disk pair and its bipolar coordinate frame.

Bipolar coordinates (xi, theta) are defined by
    exp(xi + i*theta) = (alpha + z) / (alpha - z),    z = x1 + i*x2,
with poles at (+-alpha, 0). After translation by x_0 both circles are
xi-level curves: the inclusion boundary is {xi = xi_i}, the outer boundary is
{xi = xi_e}, and 0 < xi_e < xi_i.

Array functions (``*_array``) take numpy arrays of xi/theta or complex z and
are what the solvers use; the typed functions wrap them for single points.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError, PoleError, SingularPointError
from .objs.field_objs import Side
from .objs.geometry_objs import (
    BipolarFrame,
    BipolarPoint,
    CartesianPoint,
    Circle,
    DiskPairGeometry,
    normalize_angle,
)

logger = logging.getLogger(__name__)

# below this gap the constants of derive_frame lose most of their digits
EPS_PRECISION_THRESHOLD = 1e-10
_SINGULAR_TOL = 1e-14
_BOUNDARY_RTOL = 1e-12


def derive_frame(geom: DiskPairGeometry) -> BipolarFrame:
    r_i, r_e, eps = geom.r_i, geom.r_e, geom.eps
    if not 0.0 < r_i < r_e:
        raise DomainError(f"radii must satisfy 0 < r_i < r_e, got {r_i=}, {r_e=}")
    if not eps > 0.0:
        raise DomainError(f"gap must be positive, got {eps=}")
    if eps >= r_e - r_i:
        raise DomainError(f"{eps=} must be smaller than r_e - r_i = {r_e - r_i}")
    if eps < EPS_PRECISION_THRESHOLD:
        logger.warning(f"{eps=} is below {EPS_PRECISION_THRESHOLD}; frame constants lose precision")

    gap = r_e - r_i - eps
    c_i = (r_e ** 2 - r_i ** 2 - gap ** 2) / (2.0 * gap)
    c_e = c_i + gap
    x_0 = c_e - r_e
    alpha = math.sqrt(eps * (2.0 * r_i + eps) * (2.0 * r_e - eps) * (2.0 * r_e - 2.0 * r_i - eps)) / (2.0 * gap)
    xi_i = 0.5 * math.log((c_i + alpha) / (c_i - alpha))
    xi_e = 0.5 * math.log((c_e + alpha) / (c_e - alpha))
    xi_gap = 0.5 * math.log(((c_i + alpha) * (c_e - alpha)) / ((c_i - alpha) * (c_e + alpha)))
    r_star = math.sqrt(2.0 * r_i * r_e / (r_e - r_i))

    frame = BipolarFrame(
        r_i=r_i,
        r_e=r_e,
        eps=eps,
        alpha=alpha,
        c_i=c_i,
        c_e=c_e,
        x_0=x_0,
        xi_i=xi_i,
        xi_e=xi_e,
        xi_gap=xi_gap,
        r_star=r_star,
    )
    logger.debug(f"{frame=}")
    return frame


def circle_of_level(frame: BipolarFrame, xi0: float) -> Tuple[float, float]:
    """
    Centre abscissa and radius of the circle {xi = xi0}, xi0 != 0.
    """
    if xi0 == 0.0:
        raise DomainError("the level xi = 0 is the imaginary axis, not a circle")
    return frame.alpha / math.tanh(xi0), frame.alpha / abs(math.sinh(xi0))


def level_circle(frame: BipolarFrame, xi0: float) -> Circle:
    center, radius = circle_of_level(frame, xi0)
    return Circle(center=(center, 0.0), radius=radius)


# region Array forms
def normalize_angle_array(theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return theta - 2.0 * np.pi * np.ceil((theta - np.pi) / (2.0 * np.pi))


def _check_regular(xi: np.ndarray, theta: np.ndarray) -> None:
    bad = (np.abs(xi) <= _SINGULAR_TOL) & (np.cos(theta) <= -1.0 + _SINGULAR_TOL)
    if np.any(bad):
        raise SingularPointError("(xi, theta) = (0, pi) is the point at infinity")


def z_array(frame: BipolarFrame, xi, theta) -> np.ndarray:
    """
    z = alpha * sinh(xi) / (cosh(xi) + cos(theta)) + i * alpha * sin(theta) / (cosh(xi) + cos(theta)),
    written with everything divided by cosh(xi) so that xi = +-inf gives the poles.
    """
    xi = np.asarray(xi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_regular(xi, theta)
    with np.errstate(over="ignore"):
        cosh_xi = np.cosh(xi)
    denominator = 1.0 + np.cos(theta) / cosh_xi
    x1 = frame.alpha * np.tanh(xi) / denominator
    x2 = frame.alpha * np.sin(theta) / cosh_xi / denominator
    return x1 + 1j * x2


def bipolar_array(frame: BipolarFrame, z) -> Tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=complex)
    plus = frame.alpha + z
    minus = frame.alpha - z
    if np.any(plus == 0) or np.any(minus == 0):
        raise PoleError("the poles (+-alpha, 0) have no finite bipolar coordinates")
    xi = np.log(np.abs(plus)) - np.log(np.abs(minus))
    theta = normalize_angle_array(np.angle(plus * np.conj(minus)))
    return xi, theta


def scale_factor_array(frame: BipolarFrame, xi, theta) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_regular(xi, theta)
    return (np.cosh(xi) + np.cos(theta)) / frame.alpha


def dz_dxi_array(frame: BipolarFrame, xi, theta) -> np.ndarray:
    """
    dz/dxi = 2 alpha u / (1 + u)^2 with u = exp(-(xi + i theta)) or its inverse,
    whichever has |u| <= 1; the expression is invariant under u -> 1/u.
    """
    xi = np.asarray(xi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    _check_regular(xi, theta)
    sign = np.where(xi >= 0.0, 1.0, -1.0)
    u = np.exp(-np.abs(xi) - 1j * sign * theta)
    return 2.0 * frame.alpha * u / (1.0 + u) ** 2


def basis_array(frame: BipolarFrame, xi, theta) -> Tuple[np.ndarray, np.ndarray]:
    """
    Unit vectors e_xi, e_theta as complex numbers; e_theta = i * e_xi.
    """
    dz = dz_dxi_array(frame, xi, theta)
    e_xi = dz / np.abs(dz)
    return e_xi, 1j * e_xi


def gradient_from_partials(frame: BipolarFrame, xi, theta, d_xi, d_theta) -> np.ndarray:
    """
    grad w = h (dw/dxi e_xi + dw/dtheta e_theta), packed as a complex number.
    """
    e_xi, _ = basis_array(frame, xi, theta)
    return scale_factor_array(frame, xi, theta) * e_xi * (np.asarray(d_xi) + 1j * np.asarray(d_theta))


def project_gradient(frame: BipolarFrame, xi, theta, gradient) -> Tuple[np.ndarray, np.ndarray]:
    e_xi, e_theta = basis_array(frame, xi, theta)
    gradient = np.asarray(gradient, dtype=complex)
    return (gradient * np.conj(e_xi)).real, (gradient * np.conj(e_theta)).real


def core_mask(frame: BipolarFrame, xi, side: Optional[Side] = None) -> np.ndarray:
    """
    True where a point lies in the inclusion (xi > xi_i). Points on the
    inclusion boundary belong to ``side``: INNER is the limit from inside
    the inclusion, OUTER (and the default) the limit from the shell.
    """
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < frame.xi_e * (1.0 - _BOUNDARY_RTOL)):
        raise DomainError("point outside the closed outer disk")
    if np.any(np.isposinf(xi)):
        raise PoleError("the pole (alpha, 0) has no finite gradient representation")
    core = xi > frame.xi_i
    if side is not None:
        on_boundary = np.abs(xi - frame.xi_i) <= _BOUNDARY_RTOL * frame.xi_i
        core = np.where(on_boundary, side is Side.INNER, core)
    return core


# endregion Array forms

def to_cartesian(frame: BipolarFrame, p: BipolarPoint) -> CartesianPoint:
    return CartesianPoint.from_complex(complex(z_array(frame, p.xi, p.theta)))


def to_bipolar(frame: BipolarFrame, x: CartesianPoint) -> BipolarPoint:
    xi, theta = bipolar_array(frame, x.z)
    return BipolarPoint(xi=float(xi), theta=float(theta))


def scale_factor(frame: BipolarFrame, p: BipolarPoint) -> float:
    return float(scale_factor_array(frame, p.xi, p.theta))


def reflect_level(frame: BipolarFrame, xi0: float, p: BipolarPoint) -> BipolarPoint:
    """
    Reflection across the circle {xi = xi0}: (xi, theta) -> (2 xi0 - xi, theta).
    """
    if xi0 == 0.0:
        raise DomainError("reflection level must be nonzero")
    near_pi = math.pi - abs(normalize_angle(p.theta)) <= _SINGULAR_TOL
    if abs(p.xi - 2.0 * xi0) <= _SINGULAR_TOL * max(1.0, abs(xi0)) and near_pi:
        raise SingularPointError(f"({2.0 * xi0}, pi) is mapped to the point at infinity")
    return BipolarPoint(xi=2.0 * xi0 - p.xi, theta=p.theta)


def basis_vectors(frame: BipolarFrame, p: BipolarPoint) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    e_xi, e_theta = basis_array(frame, p.xi, p.theta)
    e_xi, e_theta = complex(e_xi), complex(e_theta)
    return (e_xi.real, e_xi.imag), (e_theta.real, e_theta.imag)
