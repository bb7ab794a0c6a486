import math
import re
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, root_validator, validator
from typing_extensions import Literal

from .asymptotic_objs import SolutionName
from .field_objs import BoundaryKind, FourierBoundaryData, Side

TaskName = Literal["solve", "boundary-profile", "field-grid", "sweep", "validate"]

_RULE_PATTERN = re.compile(r"^\s*(k2eps|k2overEps)\s*=\s*(\S+)\s*$")


def parse_number(value) -> float:
    """
    A float from a JSON number or from a string holding a decimal or an exact rational like "1/3200".
    """
    if isinstance(value, bool):
        raise ValueError("expected a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as err:
            raise ValueError(f"cannot parse {value!r} as a number") from err
    raise ValueError(f"expected a number, got {type(value).__name__}")


def _parse_optional(value) -> Optional[float]:
    return None if value is None else parse_number(value)


def _parse_list(value) -> Optional[List[float]]:
    if value is None:
        return None
    if not isinstance(value, (list, tuple)):
        raise ValueError("expected a list of numbers")
    return [parse_number(item) for item in value]


def eps_schedule(name: str, n: int) -> float:
    """
    Gap schedules shrinking by 64 per step: "wide" gives 1/(50 * 64^(n-1)), "narrow" gives 1/(50 * 64^n).
    """
    if n < 1:
        raise ValueError("schedules are indexed from 1")
    if name == "wide":
        return float(Fraction(1, 50 * 64 ** (n - 1)))
    if name == "narrow":
        return float(Fraction(1, 50 * 64 ** n))
    raise ValueError(f"unknown schedule {name!r}")


# region NestedModels
class GeometryConfig(BaseModel):
    r_i: float = 2.0
    r_e: float = 5.0
    eps: float = 1.0 / 50.0
    eps_list: Optional[List[float]] = None

    _numbers = validator("r_i", "r_e", "eps", pre=True, allow_reuse=True)(parse_number)
    _lists = validator("eps_list", pre=True, allow_reuse=True)(_parse_list)

    @validator("eps_list")
    def _nonempty(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and not value:
            raise ValueError("eps_list must not be empty")
        return value

    @root_validator(skip_on_failure=True)
    def _admissible(cls, values: dict) -> dict:
        r_i, r_e = values["r_i"], values["r_e"]
        if not 0.0 < r_i < r_e:
            raise ValueError("radii must satisfy 0 < r_i < r_e")
        for eps in values["eps_list"] or [values["eps"]]:
            if not 0.0 < eps < r_e - r_i:
                raise ValueError(f"eps={eps} must lie in (0, r_e - r_i)")
        return values

    def epsilons(self) -> List[float]:
        return list(self.eps_list) if self.eps_list is not None else [self.eps]


class ConductivityConfig(BaseModel):
    """
    Exactly one of ``k``, ``k_list`` or ``rule``; ``rule`` is "k2eps=c" (k = sqrt(c / eps))
    or "k2overEps=c" (k = sqrt(c eps)). Without any of them k = 2.
    """
    k: Optional[float] = None
    k_list: Optional[List[float]] = None
    rule: Optional[str] = None

    _numbers = validator("k", pre=True, allow_reuse=True)(_parse_optional)
    _lists = validator("k_list", pre=True, allow_reuse=True)(_parse_list)

    @validator("k")
    def _positive(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not value > 0.0:
            raise ValueError("k must be positive")
        return value

    @validator("k_list")
    def _positive_items(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and (not value or any(not k > 0.0 for k in value)):
            raise ValueError("k_list must hold positive values")
        return value

    @validator("rule")
    def _rule(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        match = _RULE_PATTERN.match(value)
        if match is None:
            raise ValueError("rule must read 'k2eps=c' or 'k2overEps=c'")
        constant = parse_number(match.group(2))
        if not (constant > 0.0 and math.isfinite(constant)):
            raise ValueError("the schedule constant must be positive")
        return value

    @root_validator(skip_on_failure=True)
    def _exactly_one(cls, values: dict) -> dict:
        given = [name for name in ("k", "k_list", "rule") if values.get(name) is not None]
        if len(given) > 1:
            raise ValueError(f"give only one of k, k_list, rule; got {given}")
        if not given:
            values["k"] = 2.0
        return values

    def resolve(self, eps_list: List[float]) -> List[float]:
        if self.k is not None:
            return [self.k] * len(eps_list)
        if self.k_list is not None:
            if len(self.k_list) != len(eps_list):
                raise ValueError("k_list and eps_list differ in length")
            return list(self.k_list)
        name, constant = _RULE_PATTERN.match(self.rule).groups()
        c = parse_number(constant)
        if name == "k2eps":
            return [math.sqrt(c / eps) for eps in eps_list]
        return [math.sqrt(c * eps) for eps in eps_list]


class BoundaryDataConfig(BaseModel):
    kind: BoundaryKind = BoundaryKind.DIRICHLET
    cos_coeffs: List[float] = [1.0]
    sin_coeffs: List[float] = []
    n_modes: int = 64

    _lists = validator("cos_coeffs", "sin_coeffs", pre=True, allow_reuse=True)(_parse_list)

    def to_data(self, r_e: float) -> FourierBoundaryData:
        return FourierBoundaryData(
            kind=self.kind,
            r_e=r_e,
            cos_coeffs=tuple(self.cos_coeffs),
            sin_coeffs=tuple(self.sin_coeffs),
            n_modes=self.n_modes,
        )


class GridConfig(BaseModel):
    profile_points: int = 1024
    profile_side: Side = Side.OUTER
    grid_size: int = 200
    sweep_points: int = 4096
    # untranslated Cartesian points: one in the gap, one in the shell, one in the inclusion
    points: List[Tuple[float, float]] = [(0.01, 0.0), (1.5, 3.0), (1.0, 0.0)]

    @validator("profile_points", "grid_size", "sweep_points")
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("resolution must be at least 1")
        return value


class ToleranceConfig(BaseModel):
    spectral: float = 1e-12
    reflection: float = 1e-13
    reflection_n_max: int = 10 ** 6
    solver_agreement: float = 1e-8

    @validator("spectral", "reflection", "solver_agreement")
    def _positive(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("tolerances must be positive")
        return value


# endregion NestedModels

# region Models
class RunConfig(BaseModel):
    task: TaskName = "validate"
    geometry: GeometryConfig = GeometryConfig()
    conductivity: ConductivityConfig = ConductivityConfig()
    boundary_data: BoundaryDataConfig = BoundaryDataConfig()
    grid: GridConfig = GridConfig()
    tolerances: ToleranceConfig = ToleranceConfig()
    solution: Optional[SolutionName] = None
    out: Optional[Path] = None
    threads: int = 1

    @validator("threads")
    def _positive_threads(cls, value: int) -> int:
        if value < 1:
            raise ValueError("threads must be at least 1")
        return value

    @root_validator(skip_on_failure=True)
    def _schedule_fits(cls, values: dict) -> dict:
        eps_list = values["geometry"].epsilons()
        k_list = values["conductivity"].k_list
        if k_list is not None and len(k_list) != len(eps_list):
            raise ValueError("conductivity.k_list and geometry.eps_list differ in length")
        return values

    def schedule(self) -> List[Tuple[float, float]]:
        eps_list = self.geometry.epsilons()
        return list(zip(eps_list, self.conductivity.resolve(eps_list)))
# endregion Models
