"""Deterministic assisted-transmission protocol as alphabet-index tables"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from bitassist.core.errors import DimensionMismatchError, InputValidationError
from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation


@dataclass(frozen=True)
class ProtocolStrategy:
    """
    Deterministic maps, all as alphabet indices:

    e1[a] in R, e2[a][p] in X, d1[y] in S, d2[y][q] in {0, 1}
    """

    e1: Tuple[int, int]
    e2: Tuple[Tuple[int, ...], Tuple[int, ...]]
    d1: Tuple[int, ...]
    d2: Tuple[Tuple[int, ...], ...]

    def validate(self, ch: Channel, d: Correlation) -> None:
        R, S, P, Q = d.sizes
        X, Y = ch.num_inputs, ch.num_outputs

        def check(name: str, values, size: int, shape: tuple) -> None:
            arr = np.asarray(values)
            if arr.shape != shape:
                raise DimensionMismatchError(f"{name} has shape {arr.shape}, expected {shape}")
            if arr.size and (arr.min() < 0 or arr.max() >= size):
                raise InputValidationError(f"{name} has entries outside 0..{size - 1}")

        check("e1", self.e1, R, (2,))
        check("e2", self.e2, X, (2, P))
        check("d1", self.d1, S, (Y,))
        check("d2", self.d2, 2, (Y, Q))
