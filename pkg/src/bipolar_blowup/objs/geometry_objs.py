import math
from typing import Optional, Tuple

from pydantic import BaseModel, validator


def normalize_angle(theta: float) -> float:
    """
    Map an angle into (-pi, pi].
    """
    return theta - 2.0 * math.pi * math.ceil((theta - math.pi) / (2.0 * math.pi))


# region NestedModels
class CartesianPoint(BaseModel):
    x1: float
    x2: float

    class Config:
        frozen = True

    @validator("x1", "x2")
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("Cartesian components must be finite")
        return value

    @property
    def z(self) -> complex:
        return complex(self.x1, self.x2)

    @classmethod
    def from_complex(cls, z: complex) -> "CartesianPoint":
        return cls(x1=z.real, x2=z.imag)


class BipolarPoint(BaseModel):
    xi: float
    theta: float

    class Config:
        frozen = True

    @validator("theta")
    def _normalize_theta(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("theta must be finite")
        return normalize_angle(value)


class Circle(BaseModel):
    center: Tuple[float, float]
    radius: float

    class Config:
        frozen = True

    @validator("radius")
    def _positive_radius(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("radius must be positive")
        return value

    @property
    def center_z(self) -> complex:
        return complex(*self.center)


# endregion NestedModels

# region Models
class DiskPairGeometry(BaseModel):
    """
    The two disks before translation: Omega of radius r_e centred at (r_e, 0)
    and D of radius r_i centred at (r_i + eps, 0).
    """
    r_i: float
    r_e: float
    eps: float

    class Config:
        frozen = True


class BipolarFrame(BaseModel):
    r_i: float
    r_e: float
    eps: float
    alpha: float
    c_i: float
    c_e: float
    x_0: float
    xi_i: float
    xi_e: float
    xi_gap: float  # xi_i - xi_e, evaluated without cancellation
    r_star: float

    class Config:
        frozen = True

    @property
    def geometry(self) -> DiskPairGeometry:
        return DiskPairGeometry(r_i=self.r_i, r_e=self.r_e, eps=self.eps)


class GradientSample(BaseModel):
    point: CartesianPoint
    bipolar: BipolarPoint
    value: float
    gradient: Tuple[float, float]
    grad_xi: float
    grad_theta: float
    terms: Optional[int] = None
    truncated: bool = False

    class Config:
        frozen = True
# endregion Models
