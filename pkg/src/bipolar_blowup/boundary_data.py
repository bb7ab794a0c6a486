"""
Boundary data on the outer circle and the background harmonic fields H, H_d.
"""
import logging
from typing import Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError
from .objs.field_objs import BoundaryKind, FourierBoundaryData, HarmonicDiskField
from .objs.geometry_objs import CartesianPoint

logger = logging.getLogger(__name__)

_DISK_TOL = 1e-9


def harmonic_extension(data: FourierBoundaryData) -> HarmonicDiskField:
    """
    Dirichlet mode n of amplitude 1 extends to (rho/r_e)^n; Neumann mode n
    extends to (r_e/n)(rho/r_e)^n, whose radial derivative on the circle is 1.
    """
    a, b = data.padded()
    if data.kind is BoundaryKind.NEUMANN:
        weight = data.r_e / np.arange(1, data.mode_count + 1)
        a, b = a * weight, b * weight
    field = HarmonicDiskField(
        center=(data.r_e, 0.0),
        radius=data.r_e,
        cos_coeffs=tuple(a.tolist()),
        sin_coeffs=tuple(b.tolist()),
    )
    logger.debug(f"{data.kind=}; {field.degree=}")
    return field


# region Array forms
def _scaled_argument(field: HarmonicDiskField, z, check_domain: bool) -> np.ndarray:
    w = (np.asarray(z, dtype=complex) - field.center_z) / field.radius
    if check_domain and np.any(np.abs(w) > 1.0 + _DISK_TOL):
        raise DomainError("point outside the closed disk of the field")
    return w


def value_array(field: HarmonicDiskField, z, check_domain: bool = True) -> np.ndarray:
    w = _scaled_argument(field, z, check_domain)
    return npoly.polyval(w, field.holomorphic_coeffs).real


def gradient_array(field: HarmonicDiskField, z, check_domain: bool = True) -> np.ndarray:
    """
    grad H packed as the complex number H_x1 + i H_x2 = conj(f'(w)) / R.
    """
    w = _scaled_argument(field, z, check_domain)
    if field.degree == 0:
        return np.zeros_like(w)
    derivative = npoly.polyval(w, npoly.polyder(field.holomorphic_coeffs))
    return np.conj(derivative) / field.radius


def boundary_trace(field: HarmonicDiskField, kind: BoundaryKind, t) -> np.ndarray:
    """
    H on the circle (Dirichlet) or its outward radial derivative (Neumann), at angle t.
    """
    t = np.asarray(t, dtype=float)
    z = field.center_z + field.radius * np.exp(1j * t)
    if kind is BoundaryKind.DIRICHLET:
        return value_array(field, z)
    grad = gradient_array(field, z)
    return grad.real * np.cos(t) + grad.imag * np.sin(t)


def data_values(data: FourierBoundaryData, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    a, b = data.padded()
    n = np.arange(1, data.mode_count + 1)
    phase = np.multiply.outer(t, n)
    return np.cos(phase) @ a + np.sin(phase) @ b


# endregion Array forms

def eval_field(field: HarmonicDiskField, x: CartesianPoint) -> float:
    return float(value_array(field, x.z))


def grad_field(field: HarmonicDiskField, x: CartesianPoint) -> Tuple[float, float]:
    grad = complex(gradient_array(field, x.z))
    return grad.real, grad.imag


def extract_C1C2(field: HarmonicDiskField) -> Tuple[float, float]:
    """
    (dH/dx1, dH/dx2) at the origin, the near-touch point of the untranslated outer circle.
    """
    return grad_field(field, CartesianPoint(x1=0.0, x2=0.0))
