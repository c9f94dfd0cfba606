"""Discrete memoryless channel N(y|x) as a validated, immutable value"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from bitassist.core.errors import DimensionMismatchError, InputValidationError

logger = logging.getLogger(__name__)

ENTRY_TOL = 1e-12
ROW_SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic matrix N(y|x): rows are inputs, columns are outputs"""

    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    matrix: np.ndarray
    name: str = "channel"

    def __post_init__(self):
        inputs = tuple(str(s) for s in self.inputs)
        outputs = tuple(str(s) for s in self.outputs)
        m = np.array(self.matrix, dtype=float)
        if not inputs or not outputs:
            raise InputValidationError("Channel needs at least one input and one output")
        if m.shape != (len(inputs), len(outputs)):
            raise DimensionMismatchError(
                f"Channel matrix has shape {m.shape}, expected ({len(inputs)}, {len(outputs)})"
            )
        if len(set(inputs)) != len(inputs) or len(set(outputs)) != len(outputs):
            raise InputValidationError("Channel alphabet labels must be distinct")
        bad = np.argwhere((m < -ENTRY_TOL) | (m > 1 + ENTRY_TOL) | ~np.isfinite(m))
        if bad.size:
            x, y = bad[0]
            raise InputValidationError(
                f"Channel entry out of [0, 1] at row {x} ({inputs[x]}), column {y}: {m[x, y]!r}"
            )
        m = np.clip(m, 0.0, 1.0)
        sums = m.sum(axis=1)
        off = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if off.size:
            x = off[0]
            raise InputValidationError(
                f"Channel row {x} ({inputs[x]}) sums to {sums[x]!r}, expected 1"
            )
        m.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def build(
        cls,
        matrix: Sequence[Sequence[float]],
        inputs: Sequence[str] = None,
        outputs: Sequence[str] = None,
        name: str = "channel",
        renormalize: bool = False,
    ) -> "Channel":
        """Construct with default labels 0..k-1 and optional row renormalization"""
        m = np.array(matrix, dtype=float)
        if m.ndim != 2:
            raise DimensionMismatchError(f"Channel matrix must be 2-D, got {m.ndim}-D")
        if renormalize:
            sums = m.sum(axis=1, keepdims=True)
            drift = np.abs(sums.ravel() - 1.0) > ROW_SUM_TOL
            if np.any(sums <= 0):
                raise InputValidationError("Cannot renormalize a row with zero mass")
            if np.any(drift):
                logger.warning(f"Renormalizing {int(drift.sum())} channel row(s) of '{name}'")
            m = m / sums
        inputs = inputs if inputs is not None else [str(i) for i in range(m.shape[0])]
        outputs = outputs if outputs is not None else [str(j) for j in range(m.shape[1])]
        return cls(tuple(inputs), tuple(outputs), m, name)

    @property
    def num_inputs(self) -> int:
        return len(self.inputs)

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    @property
    def rows(self) -> np.ndarray:
        return self.matrix

    def permuted(self, input_order: Sequence[int], output_order: Sequence[int]) -> "Channel":
        """Same channel with rows and columns reordered"""
        m = self.matrix[np.ix_(list(input_order), list(output_order))]
        return Channel(
            tuple(self.inputs[i] for i in input_order),
            tuple(self.outputs[j] for j in output_order),
            m,
            self.name,
        )
