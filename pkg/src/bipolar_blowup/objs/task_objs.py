from typing import Dict, List

import numpy as np
from pydantic import BaseModel, root_validator


class TableOutput(BaseModel):
    """
    A numeric table plus the metadata written above it as '#' lines.
    """
    task: str
    columns: List[str]
    rows: np.ndarray
    metadata: Dict[str, str] = {}
    passed: bool = True

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def _shape(cls, values: dict) -> dict:
        rows = np.atleast_2d(np.asarray(values["rows"], dtype=float))
        if rows.size and rows.shape[1] != len(values["columns"]):
            raise ValueError(f"{rows.shape[1]} columns of data for {len(values['columns'])} names")
        values["rows"] = rows
        return values
