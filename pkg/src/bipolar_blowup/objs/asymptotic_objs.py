import math
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, validator
from typing_extensions import Literal

from .field_objs import BoundaryKind, Side

NORM_NAMES = ("core_xi", "core_theta", "shell_xi", "shell_theta")

# blow-up pattern over NORM_NAMES for each classification row
TABLE_ROWS: Dict[str, Tuple[bool, bool, bool, bool]] = {
    "u": (True, True, False, True),
    "v": (False, False, True, False),
    "bounded": (False, False, False, False),
}

SolutionName = Literal["u", "v"]
ImageFormula = Literal["v", "v_alt", "u", "u_alt"]


# region NestedModels
class ChargeBranch(str, Enum):
    PLUS = "plus"    # supported on [alpha, c_i]
    MINUS = "minus"  # supported on [-c_i, -alpha]


# endregion NestedModels

# region Models
class ImageChargeSystem(BaseModel):
    alpha: float
    c_i: float
    xi_i: float
    beta: float
    branch: ChargeBranch
    prefactor: float

    class Config:
        frozen = True

    @validator("beta")
    def _positive_beta(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("beta must be positive")
        return value

    @property
    def support(self) -> Tuple[float, float]:
        if self.branch is ChargeBranch.PLUS:
            return self.alpha, self.c_i
        return -self.c_i, -self.alpha

    @property
    def sign(self) -> float:
        return 1.0 if self.branch is ChargeBranch.PLUS else -1.0


class BoundaryProfile(BaseModel):
    """
    Gradient traces on the inclusion boundary. ``asym_*`` hold the e_xi
    component of the image-charge gradients for Dirichlet data and the
    e_theta component for Neumann data.
    """
    kind: BoundaryKind
    side: Side
    theta: np.ndarray
    exact_xi: np.ndarray
    exact_theta: np.ndarray
    asym_primary: np.ndarray
    asym_alternative: np.ndarray
    solver_gap: float = 0.0

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    def rows(self) -> np.ndarray:
        return np.column_stack([self.theta, self.exact_xi, self.exact_theta, self.asym_primary, self.asym_alternative])


class BlowUpReport(BaseModel):
    solution: SolutionName
    kind: BoundaryKind
    eps: List[float]
    k: List[float]
    c1: float
    c2: float
    norms: Dict[str, List[float]]
    slopes: Dict[str, float]
    slope_intervals: Dict[str, Tuple[float, float]]
    growth_factors: Dict[str, List[float]]
    variation: Dict[str, float]
    pattern: Dict[str, bool]
    row: str
    warnings: List[str] = []

    @validator("norms")
    def _nonnegative(cls, value: Dict[str, List[float]]) -> Dict[str, List[float]]:
        for name, norms in value.items():
            if any(not math.isfinite(n) or n < 0.0 for n in norms):
                raise ValueError(f"{name} norms must be finite and nonnegative")
        return value

    def blows_up(self, name: str) -> bool:
        return self.pattern[name]
# endregion Models
