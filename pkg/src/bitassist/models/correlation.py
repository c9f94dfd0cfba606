"""
Two-part correlation (box) p(p, q | r, s).

Alice feeds r and reads p, Bob feeds s and reads q. Tables are indexed
[r][s][p][q].
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from bitassist.core.errors import DimensionMismatchError, InputValidationError

logger = logging.getLogger(__name__)

NEGATIVE_TOL = 1e-12
NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Correlation:
    """p(p, q | r, s) over alphabets (R, S, P, Q)"""

    alphabets: Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]
    table: np.ndarray
    name: str = "box"

    def __post_init__(self):
        alphabets = tuple(tuple(str(s) for s in labels) for labels in self.alphabets)
        if len(alphabets) != 4 or any(len(labels) == 0 for labels in alphabets):
            raise InputValidationError("A correlation needs four non-empty alphabets (R, S, P, Q)")
        t = np.array(self.table, dtype=float)
        shape = tuple(len(labels) for labels in alphabets)
        if t.shape != shape:
            raise DimensionMismatchError(f"Correlation table has shape {t.shape}, expected {shape}")
        if not np.all(np.isfinite(t)):
            raise InputValidationError("Correlation table has non-finite entries")

        bad = np.argwhere(t < -NEGATIVE_TOL)
        if bad.size:
            r, s, p, q = bad[0]
            raise InputValidationError(
                f"Negative probability at [r={r}][s={s}][p={p}][q={q}]: {t[r, s, p, q]!r}"
            )
        clamped = int(np.count_nonzero(t < 0))
        if clamped:
            logger.warning(f"Clamped {clamped} tiny negative entries of '{self.name}' to 0")
            t = np.maximum(t, 0.0)

        sums = t.sum(axis=(2, 3))
        off = np.argwhere(np.abs(sums - 1.0) > NORMALIZATION_TOL)
        if off.size:
            r, s = off[0]
            raise InputValidationError(
                f"Correlation block (r={r}, s={s}) sums to {sums[r, s]!r}, expected 1"
            )
        t.setflags(write=False)
        object.__setattr__(self, "alphabets", alphabets)
        object.__setattr__(self, "table", t)

    @classmethod
    def build(cls, table: np.ndarray, name: str = "box") -> "Correlation":
        """Construct with labels 0..k-1 on every alphabet"""
        t = np.asarray(table, dtype=float)
        if t.ndim != 4:
            raise DimensionMismatchError(f"Correlation table must be 4-D, got {t.ndim}-D")
        return cls(tuple(tuple(str(i) for i in range(k)) for k in t.shape), t, name)

    @property
    def sizes(self) -> Tuple[int, int, int, int]:
        return self.table.shape

    @property
    def is_binary(self) -> bool:
        return self.sizes == (2, 2, 2, 2)

    def alice_marginal(self) -> np.ndarray:
        """p(p | r, s), shape (R, S, P)"""
        return self.table.sum(axis=3)

    def bob_marginal(self) -> np.ndarray:
        """p(q | r, s), shape (R, S, Q)"""
        return self.table.sum(axis=2)
