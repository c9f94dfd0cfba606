from typing import List

import numpy as np
from pydantic import BaseModel, Field, model_validator

from bitassist.models.correlation import Correlation


class CorrelationFile(BaseModel):
    """On-disk two-part box: alphabets [R, S, P, Q] and table[r][s][p][q]"""

    name: str = "box"
    alphabets: List[List[str]] = Field(min_length=4, max_length=4)
    table: List[List[List[List[float]]]]

    @model_validator(mode="after")
    def check_shape(self) -> "CorrelationFile":
        expected = tuple(len(labels) for labels in self.alphabets)
        try:
            shape = np.asarray(self.table, dtype=float).shape
        except ValueError:
            raise ValueError("table is ragged")
        if shape != expected:
            raise ValueError(f"table has shape {shape}, alphabets imply {expected}")
        return self

    def to_correlation(self) -> Correlation:
        return Correlation(
            tuple(tuple(labels) for labels in self.alphabets),
            np.asarray(self.table, dtype=float),
            self.name,
        )

    @classmethod
    def from_correlation(cls, d: Correlation) -> "CorrelationFile":
        return cls(
            name=d.name,
            alphabets=[list(labels) for labels in d.alphabets],
            table=d.table.tolist(),
        )
