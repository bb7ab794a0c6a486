from typing import List

from pydantic import BaseModel


class CheckResult(BaseModel):
    name: str
    tolerance: float
    measured: float
    passed: bool
    context: str = ""


class ValidationReport(BaseModel):
    checks: List[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]
