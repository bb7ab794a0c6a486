import logging
import math
from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import BaseModel, root_validator, validator

from .geometry_objs import BipolarFrame

logger = logging.getLogger(__name__)

DEFAULT_N_MODES = 64


# region NestedModels
class BoundaryKind(str, Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


class Side(str, Enum):
    INNER = "inner"
    OUTER = "outer"


# endregion NestedModels

# region Models
class FourierBoundaryData(BaseModel):
    """
    g(t) = sum_{n>=1} a_n cos(nt) + b_n sin(nt) on the circle t -> (r_e + r_e cos t, r_e sin t).
    There is no n = 0 term, so the data is mean-zero by construction.
    """
    kind: BoundaryKind
    r_e: float
    cos_coeffs: Tuple[float, ...] = ()
    sin_coeffs: Tuple[float, ...] = ()
    n_modes: int = DEFAULT_N_MODES

    class Config:
        frozen = True

    @validator("r_e")
    def _positive_radius(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("r_e must be positive")
        return value

    @validator("n_modes")
    def _positive_cap(cls, value: int) -> int:
        if value < 1:
            raise ValueError("n_modes must be at least 1")
        return value

    @root_validator(skip_on_failure=True)
    def _truncate(cls, values: dict) -> dict:
        cap = values["n_modes"]
        for name in ("cos_coeffs", "sin_coeffs"):
            coeffs = tuple(float(c) for c in values[name])
            if not all(math.isfinite(c) for c in coeffs):
                raise ValueError(f"{name} must be finite")
            if len(coeffs) > cap:
                logger.warning(f"{name} has {len(coeffs)} modes; truncated to {cap=}")
                coeffs = coeffs[:cap]
            values[name] = coeffs
        return values

    @property
    def mode_count(self) -> int:
        return max(len(self.cos_coeffs), len(self.sin_coeffs))

    def padded(self) -> Tuple[np.ndarray, np.ndarray]:
        n = self.mode_count
        a = np.zeros(n)
        b = np.zeros(n)
        a[:len(self.cos_coeffs)] = self.cos_coeffs
        b[:len(self.sin_coeffs)] = self.sin_coeffs
        return a, b

    def regularity_sum(self, delta: float = 1.0) -> float:
        """
        sum n^(1+delta) (|a_n| + |b_n|), the coefficient-decay proxy for C^{1,delta} data.
        """
        a, b = self.padded()
        n = np.arange(1, self.mode_count + 1)
        return float(np.sum(n ** (1.0 + delta) * (np.abs(a) + np.abs(b))))


class HarmonicDiskField(BaseModel):
    """
    H = offset + sum_{n>=1} (rho/R)^n (a_n cos(n phi) + b_n sin(n phi)) in polar
    coordinates (rho, phi) about ``center``; R is the disk radius. The raw
    coefficients of rho^n are a_n / R^n (``raw_cos`` / ``raw_sin``).
    """
    center: Tuple[float, float]
    radius: float
    cos_coeffs: Tuple[float, ...] = ()
    sin_coeffs: Tuple[float, ...] = ()
    offset: float = 0.0

    class Config:
        frozen = True

    @validator("radius")
    def _positive_radius(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("radius must be positive")
        return value

    @root_validator(skip_on_failure=True)
    def _same_length(cls, values: dict) -> dict:
        n = max(len(values["cos_coeffs"]), len(values["sin_coeffs"]))
        values["cos_coeffs"] = tuple(values["cos_coeffs"]) + (0.0,) * (n - len(values["cos_coeffs"]))
        values["sin_coeffs"] = tuple(values["sin_coeffs"]) + (0.0,) * (n - len(values["sin_coeffs"]))
        return values

    @property
    def degree(self) -> int:
        return len(self.cos_coeffs)

    @property
    def center_z(self) -> complex:
        return complex(*self.center)

    @property
    def holomorphic_coeffs(self) -> np.ndarray:
        """
        c_0..c_N of f(w) = sum c_n w^n with H = Re f, w = (z - center) / R.
        """
        c = np.empty(self.degree + 1, dtype=complex)
        c[0] = self.offset
        c[1:] = np.asarray(self.cos_coeffs) - 1j * np.asarray(self.sin_coeffs)
        return c

    @property
    def raw_cos(self) -> Tuple[float, ...]:
        return tuple(a / self.radius ** n for n, a in enumerate(self.cos_coeffs, start=1))

    @property
    def raw_sin(self) -> Tuple[float, ...]:
        return tuple(b / self.radius ** n for n, b in enumerate(self.sin_coeffs, start=1))

    def translated(self, dx: float) -> "HarmonicDiskField":
        """
        The field x -> H(x - (dx, 0)).
        """
        return self.copy(update={"center": (self.center[0] + dx, self.center[1])})

    def gradient_bound(self) -> float:
        """
        Upper bound of |grad H| over the closed disk.
        """
        n = np.arange(1, self.degree + 1)
        return float(np.sum(n * np.abs(self.holomorphic_coeffs[1:])) / self.radius)


class BipolarModeSolution(BaseModel):
    """
    Scattered field w of the transmission problem in bipolar modes, n = 1..N,
    columns [cos, sin]:
        shell (xi_e < xi < xi_i): shell_a[n] e^{n(xi - xi_i)} + shell_b[n] e^{-n(xi - xi_e)}
        core  (xi > xi_i):        core_s[n] e^{-n(xi - xi_i)}
    plus the n = 0 part shell_a0 + shell_b0 * xi, core_s0.
    """
    frame: BipolarFrame
    kind: BoundaryKind
    k: float
    tau: float
    background: HarmonicDiskField
    shell_a: np.ndarray
    shell_b: np.ndarray
    core_s: np.ndarray
    shell_a0: float = 0.0
    shell_b0: float = 0.0
    core_s0: float = 0.0
    mean_flux_datum: float = 0.0
    truncation_estimate: float = 0.0
    truncated: bool = False

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @property
    def n_modes(self) -> int:
        return self.shell_a.shape[0]

    @property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.n_modes + 1)

    def raw_coefficients(self, n_max: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        p_n, q_n, s_n of p e^{n xi} + q e^{-n xi} (shell) and s e^{-n xi} (core)
        for n = 1..n_max, columns [cos, sin].
        """
        n = self.modes[:n_max, None].astype(float)
        xi_i, xi_e = self.frame.xi_i, self.frame.xi_e
        p = self.shell_a[:n_max] * np.exp(-n * xi_i)
        q = self.shell_b[:n_max] * np.exp(n * xi_e)
        s = self.core_s[:n_max] * np.exp(n * xi_i)
        return p, q, s
# endregion Models


class LinearBipolarExpansion(BaseModel):
    """
    x1 = x1_const + sum x1_cos[n-1] e^{-n xi} cos(n theta),
    x2 = sum x2_sin[n-1] e^{-n xi} sin(n theta), for xi > 0.
    """
    x1_const: float
    x1_cos: Tuple[float, ...]
    x2_sin: Tuple[float, ...]

    class Config:
        frozen = True

    @property
    def n_modes(self) -> int:
        return len(self.x1_cos)

    def evaluate(self, xi, theta) -> Tuple[np.ndarray, np.ndarray]:
        xi = np.asarray(xi, dtype=float)
        theta = np.asarray(theta, dtype=float)
        n = np.arange(1, self.n_modes + 1)
        decay = np.exp(-np.multiply.outer(xi, n))
        phase = np.multiply.outer(theta, n)
        x1 = self.x1_const + np.sum(decay * np.cos(phase) * np.asarray(self.x1_cos), axis=-1)
        x2 = np.sum(decay * np.sin(phase) * np.asarray(self.x2_sin), axis=-1)
        return x1, x2


class FieldSamples(BaseModel):
    """
    Value and gradient of a solution at a batch of points. ``gradient`` packs
    (d/dx1, d/dx2) as a complex number; ``grad_xi``/``grad_theta`` are its
    components along e_xi and e_theta.
    """
    xi: np.ndarray
    theta: np.ndarray
    z: np.ndarray
    value: np.ndarray
    gradient: np.ndarray
    grad_xi: np.ndarray
    grad_theta: np.ndarray
    terms: int = 0
    tail_estimate: float = 0.0
    truncated: bool = False

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False
