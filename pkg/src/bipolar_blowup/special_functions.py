"""
Lerch-type transcendent and its kernel:

    L(z; beta) = -int_0^inf z e^{-(beta+1)t} / (1 + z e^{-t}) dt  = sum_{m>=1} (-z)^m / (beta + m)
    P(z; beta) = -z dL/dz = int_0^inf z e^{-(beta+1)t} / (1 + z e^{-t})^2 dt
               = sum_{m>=1} (-1)^(m-1) m z^m / (beta + m)

and the singular functions q_d, q_u built from L on the bipolar frame.
"""
import logging
import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, validator
from scipy import integrate

from .errors import DomainError
from .geometry import normalize_angle_array
from .objs.geometry_objs import BipolarFrame, BipolarPoint

logger = logging.getLogger(__name__)

Z_MAX = 1.0 - 1e-12
SERIES_CROSSOVER = 0.8
_SERIES_TOL = 1e-17
_QUAD_EPSABS = 1e-14
_QUAD_EPSREL = 1e-13
_QUAD_WARN_FACTOR = 1e3


class LerchEvalRequest(BaseModel):
    z: complex
    beta: float

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @validator("z", pre=True)
    def _inside_unit_disk(cls, value) -> complex:
        value = complex(value)
        if abs(value) > Z_MAX:
            raise ValueError(f"|z| must not exceed {Z_MAX}")
        return value

    @validator("beta")
    def _positive_beta(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("beta must be positive")
        return value


def _check_arguments(z: np.ndarray, beta: float) -> None:
    if not beta > 0.0:
        raise DomainError(f"{beta=} must be positive")
    if z.size and np.max(np.abs(z)) > Z_MAX:
        raise DomainError("|z| must be smaller than 1")


def quadrature_cutoff(beta: float) -> float:
    return max(50.0, 40.0 / (beta + 1.0))


# region Series
def _series_length(z_abs_max: float) -> int:
    if z_abs_max == 0.0:
        return 1
    return max(1, int(math.ceil(math.log(_SERIES_TOL) / math.log(z_abs_max))))


def _series(z: np.ndarray, beta: float, weighted: bool) -> np.ndarray:
    if z.size == 0:
        return np.zeros_like(z)
    m = np.arange(1, _series_length(float(np.max(np.abs(z)))) + 1)
    powers = np.power.outer(-z, m)
    if weighted:
        terms = -m * powers / (beta + m)
    else:
        terms = powers / (beta + m)
    return terms.sum(axis=-1)


def lerch_series(z, beta: float) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    _check_arguments(z, beta)
    return _series(z, beta, weighted=False)


def kernel_series(z, beta: float) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    _check_arguments(z, beta)
    return _series(z, beta, weighted=True)


# endregion Series

# region Quadrature
def _quadrature(z: np.ndarray, beta: float, power: int, epsabs: float, epsrel: float) -> Tuple[np.ndarray, float]:
    """
    Values and an error bound: the Gauss-Kronrod estimate on [0, cutoff] plus the
    neglected tail, where |1 + z e^{-t}| >= 1 - e^{-cutoff}.
    """
    if z.size == 0:
        return np.zeros_like(z), 0.0
    flat = z.ravel()
    cutoff = quadrature_cutoff(beta)
    sign = -1.0 if power == 1 else 1.0

    def integrand(t: float) -> np.ndarray:
        values = sign * flat * math.exp(-(beta + 1.0) * t) / (1.0 + flat * math.exp(-t)) ** power
        return np.concatenate([values.real, values.imag])

    result, error = integrate.quad_vec(integrand, 0.0, cutoff, epsabs=epsabs, epsrel=epsrel, norm="max", limit=20000)
    z_abs = float(np.max(np.abs(flat)))
    tail = z_abs * math.exp(-(beta + 1.0) * cutoff) / ((beta + 1.0) * (1.0 - math.exp(-cutoff)) ** power)
    error_bound = float(error) + tail
    logger.debug(f"{flat.size=}; {error=}; {tail=}")
    if error_bound > _QUAD_WARN_FACTOR * max(epsabs, epsrel * float(np.max(np.abs(result)))):
        logger.warning(f"quadrature error bound {error_bound:.3g} above the requested tolerance")
    n = flat.size
    return (result[:n] + 1j * result[n:]).reshape(z.shape), error_bound


def lerch_quad(z, beta: float, epsabs: float = _QUAD_EPSABS, epsrel: float = _QUAD_EPSREL,
               full_output: bool = False):
    """
    With ``full_output`` returns (values, error_bound) instead of the values alone.
    """
    z = np.asarray(z, dtype=complex)
    _check_arguments(z, beta)
    values, error_bound = _quadrature(z, beta, power=1, epsabs=epsabs, epsrel=epsrel)
    return (values, error_bound) if full_output else values


def kernel_quad(z, beta: float, epsabs: float = _QUAD_EPSABS, epsrel: float = _QUAD_EPSREL,
                full_output: bool = False):
    z = np.asarray(z, dtype=complex)
    _check_arguments(z, beta)
    values, error_bound = _quadrature(z, beta, power=2, epsabs=epsabs, epsrel=epsrel)
    return (values, error_bound) if full_output else values


# endregion Quadrature

def _auto(z, beta: float, power: int, epsabs: float, epsrel: float) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    _check_arguments(z, beta)
    result = np.empty_like(z)
    near = np.abs(z) > SERIES_CROSSOVER
    result[~near] = _series(z[~near], beta, weighted=power == 2)
    result[near], _ = _quadrature(z[near], beta, power=power, epsabs=epsabs, epsrel=epsrel)
    return result


def lerch_L(z, beta: float, epsabs: float = _QUAD_EPSABS, epsrel: float = _QUAD_EPSREL) -> np.ndarray:
    """
    Series for |z| <= 0.8, adaptive Gauss-Kronrod quadrature beyond.
    """
    return _auto(z, beta, power=1, epsabs=epsabs, epsrel=epsrel)


def kernel_P(z, beta: float, epsabs: float = _QUAD_EPSABS, epsrel: float = _QUAD_EPSREL) -> np.ndarray:
    return _auto(z, beta, power=2, epsabs=epsabs, epsrel=epsrel)


def evaluate(request: LerchEvalRequest) -> Tuple[complex, complex]:
    value = complex(lerch_L(request.z, request.beta))
    kernel = complex(kernel_P(request.z, request.beta))
    return value, kernel


# region Bounds
def kernel_bound(s, theta, beta: float) -> np.ndarray:
    """
    |P(e^{-s + i theta}; beta)| <= 1 / (2 beta (cosh s + cos theta)), s > 0.
    """
    return 1.0 / (2.0 * beta * (np.cosh(s) + np.cos(theta)))


def kernel_lipschitz_bound(s1, s2, theta) -> np.ndarray:
    """
    |P(e^{-s2 + i theta}) - P(e^{-s1 + i theta})| <= (s2 - s1) / (2 (cosh s1 + cos theta)), s2 > s1 > 0.
    """
    return (np.asarray(s2) - np.asarray(s1)) / (2.0 * (np.cosh(s1) + np.cos(theta)))


def refined_kernel_bound(s: float, theta: float, beta: float) -> float:
    """
    int_0^inf e^{-beta t} / (2 (cosh(s + t) + cos theta)) dt, a bound for |P(e^{-s - i theta}; beta)|.
    The integrand is evaluated as e^{-beta t - a} / (1 + 2 cos theta e^{-a} + e^{-2a}), a = s + t.
    """

    def integrand(t: float) -> float:
        decay = math.exp(-(s + t))
        return math.exp(-beta * t) * decay / (1.0 + 2.0 * math.cos(theta) * decay + decay * decay)

    value, _ = integrate.quad(
        integrand,
        0.0,
        math.inf,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=500,
    )
    return value


def kernel_sum(xi0: float, tau_abs: float, xi, theta, alternating: bool = False, m_max: int = 100_000) -> np.ndarray:
    """
    xi0 * sum_{m=1}^{m_max} (+-|tau|)^(m-1) e^{-m xi0 + xi + i theta} / (1 + e^{-m xi0 + xi + i theta})^2,
    the discrete sum that P(e^{-(xi0 - xi) + i theta}; -ln|tau| / xi0) approximates.
    """
    xi = np.asarray(xi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if tau_abs > 0.0:
        m_stop = min(m_max, int(math.ceil(math.log(_SERIES_TOL) / math.log(tau_abs))) + 1)
    else:
        m_stop = 1
    ratio = -tau_abs if alternating else tau_abs
    total = np.zeros(np.broadcast(xi, theta).shape, dtype=complex)
    for start in range(1, m_stop + 1, 4096):
        m = np.arange(start, min(start + 4096, m_stop + 1))
        u = np.exp(np.multiply.outer(xi + 1j * theta, np.ones_like(m)) - m * xi0)
        total += np.sum(ratio ** (m - 1) * u / (1.0 + u) ** 2, axis=-1)
    return xi0 * total


# endregion Bounds

# region Singular functions
# each L-term is (coefficient, sign of xi, constant) for L(exp(sign * xi + constant - i theta))
_Term = Tuple[float, float, float]


def _q_terms(frame: BipolarFrame, neumann: bool, shell: bool) -> List[_Term]:
    coefficient = -1.0 if neumann else 1.0
    terms = [(coefficient, -1.0, -2.0 * frame.xi_gap)]
    if shell:
        terms.append((-1.0, 1.0, -2.0 * frame.xi_i))
    else:
        terms.append((-1.0, -1.0, 0.0))
    return terms


def _region(frame: BipolarFrame, xi: np.ndarray) -> np.ndarray:
    if np.any(xi <= frame.xi_e):
        raise DomainError("point outside the outer disk")
    if np.any(np.abs(xi - frame.xi_i) <= 1e-14 * frame.xi_i):
        raise DomainError("singular function is not defined on the inclusion boundary")
    return xi < frame.xi_i


def singular_array(frame: BipolarFrame, xi, theta, beta: float, neumann: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    q and its partial derivatives (dq/dxi, dq/dtheta), all complex, at bipolar points.
    """
    xi = np.asarray(xi, dtype=float)
    theta = normalize_angle_array(theta)
    xi, theta = np.broadcast_arrays(xi, theta)
    shell = _region(frame, xi)
    value = np.zeros(xi.shape, dtype=complex)
    d_xi = np.zeros(xi.shape, dtype=complex)
    d_theta = np.zeros(xi.shape, dtype=complex)
    for mask, in_shell in ((shell, True), (~shell, False)):
        if not np.any(mask):
            continue
        for coefficient, sign, constant in _q_terms(frame, neumann, in_shell):
            z = np.exp(sign * xi[mask] + constant - 1j * theta[mask])
            value[mask] += coefficient * lerch_L(z, beta)
            kernel = kernel_P(z, beta)
            d_xi[mask] += -coefficient * sign * kernel
            d_theta[mask] += coefficient * 1j * kernel
    return value, d_xi, d_theta


def q_d(frame: BipolarFrame, p: BipolarPoint, beta: float) -> complex:
    value, _, _ = singular_array(frame, p.xi, p.theta, beta, neumann=False)
    return complex(value)


def q_u(frame: BipolarFrame, p: BipolarPoint, beta: float) -> complex:
    value, _, _ = singular_array(frame, p.xi, p.theta, beta, neumann=True)
    return complex(value)
# endregion Singular functions
