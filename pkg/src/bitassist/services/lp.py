"""
Dense two-phase simplex solver with Bland's anti-cycling rule.

Problems are stated as

    maximize  c . x   subject to  A x <= b,  x_j >= 0 unless free[j]

Free variables are split into positive and negative parts so the tableau only
ever holds non-negative columns. Sizes here are small (hundreds of rows at
most), so the tableau is a plain numpy array.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from bitassist.core.config import settings
from bitassist.core.errors import DimensionMismatchError, InputValidationError, SolverError
from bitassist.models.status import LpStatus

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """maximize objective . x  s.t.  A x <= b, per-variable lower bound 0 or none"""

    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    free: Optional[Sequence[bool]] = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        b = np.asarray(self.b, dtype=float).ravel()
        A = np.asarray(self.A, dtype=float).reshape(len(b), len(c))
        free = np.zeros(len(c), dtype=bool) if self.free is None else np.asarray(self.free, bool)
        if free.shape != c.shape:
            raise DimensionMismatchError(
                f"free flags have length {free.size}, expected {c.size}"
            )
        for name, arr in (("objective", c), ("A", A), ("b", b)):
            if not np.all(np.isfinite(arr)):
                raise InputValidationError(f"LP {name} has non-finite entries")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "free", free)

    @property
    def num_vars(self) -> int:
        return self.objective.size

    @property
    def num_constraints(self) -> int:
        return self.b.size


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray
    objective_value: float
    duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL


class _Tableau:
    """Simplex tableau: constraint rows with the rhs in the last column"""

    def __init__(self, rows: np.ndarray, basis: np.ndarray, pivot_tol: float, max_pivots: int):
        self.T = rows
        self.basis = basis
        self.pivot_tol = pivot_tol
        self.max_pivots = max_pivots
        self.pivots = 0
        self.z = np.zeros(rows.shape[1])

    def set_objective(self, cost: np.ndarray) -> None:
        # Reduced-cost row for "maximize cost . x" in the current basis
        z = np.zeros(self.T.shape[1])
        z[:-1] = -cost
        for i, k in enumerate(self.basis):
            if cost[k] != 0.0:
                z += cost[k] * self.T[i]
        self.z = z

    def pivot(self, i: int, j: int) -> None:
        T = self.T
        T[i] /= T[i, j]
        col = T[:, j].copy()
        col[i] = 0.0
        T -= np.outer(col, T[i])
        self.z -= self.z[j] * T[i]
        self.basis[i] = j
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SolverError(f"Simplex pivot guard exceeded ({self.max_pivots} pivots)")

    def run(self, allowed: np.ndarray) -> LpStatus:
        tol = self.pivot_tol
        while True:
            # Bland: lowest-index improving column
            candidates = np.flatnonzero((self.z[:-1] < -tol) & allowed)
            if candidates.size == 0:
                return LpStatus.OPTIMAL
            j = int(candidates[0])

            column = self.T[:, j]
            rows = np.flatnonzero(column > tol)
            if rows.size == 0:
                return LpStatus.UNBOUNDED
            rhs = np.maximum(self.T[rows, -1], 0.0)
            ratios = rhs / column[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
            i = int(tied[np.argmin(self.basis[tied])])
            self.pivot(i, j)


def solve(
    lp: LinearProgram,
    pivot_tol: Optional[float] = None,
    max_pivots: Optional[int] = None,
) -> LpSolution:
    """
    Solve an LP with the two-phase simplex method.

    Args:
        lp: problem in "maximize c.x, A x <= b" form
        pivot_tol: pivot/reduced-cost tolerance (default from settings)
        max_pivots: pivot cap across both phases (default from settings)

    Returns:
        LpSolution with status, primal x, objective value and constraint duals
    """
    pivot_tol = settings.LP_PIVOT_TOL if pivot_tol is None else pivot_tol
    max_pivots = settings.LP_MAX_PIVOTS if max_pivots is None else max_pivots

    c, A, b, free = lp.objective, lp.A, lp.b, lp.free
    m, n = A.shape
    free_idx = np.flatnonzero(free)

    # Step 1: split free variables
    A_split = np.hstack([A, -A[:, free_idx]])
    c_split = np.concatenate([c, -c[free_idx]])
    n_struct = A_split.shape[1]

    # Step 2: slacks, sign-normalized rows, artificials for negative rhs
    negative = b < 0
    sign = np.where(negative, -1.0, 1.0)
    art_rows = np.flatnonzero(negative)
    n_art = art_rows.size
    width = n_struct + m + n_art
    rows = np.zeros((m, width + 1))
    rows[:, :n_struct] = sign[:, None] * A_split
    rows[np.arange(m), n_struct + np.arange(m)] = sign
    rows[art_rows, n_struct + m + np.arange(n_art)] = 1.0
    rows[:, -1] = np.abs(b)

    basis = n_struct + np.arange(m)
    basis[art_rows] = n_struct + m + np.arange(n_art)
    tab = _Tableau(rows, basis, pivot_tol, max_pivots)

    # Step 3: phase one drives the artificials to zero
    if n_art:
        cost1 = np.zeros(width)
        cost1[n_struct + m:] = -1.0
        tab.set_objective(cost1)
        tab.run(np.ones(width, dtype=bool))
        infeasibility = -tab.z[-1]
        if infeasibility > FEASIBILITY_TOL * max(1.0, float(np.max(np.abs(b)))):
            logger.debug(f"LP infeasible: phase-one residual {infeasibility:.3e}")
            return LpSolution(LpStatus.INFEASIBLE, np.full(n, np.nan), float("nan"),
                              pivots=tab.pivots)

        # Pivot remaining (zero-level) artificials out of the basis
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if tab.basis[i] >= n_struct + m:
                structural = np.flatnonzero(np.abs(tab.T[i, : n_struct + m]) > pivot_tol)
                if structural.size:
                    tab.pivot(i, int(structural[0]))
                else:
                    keep[i] = False
        tab.T = np.delete(tab.T[keep], np.s_[n_struct + m: width], axis=1)
        tab.basis = tab.basis[keep]
        width = n_struct + m

    # Step 4: phase two on the real objective
    cost2 = np.zeros(width)
    cost2[:n_struct] = c_split
    tab.set_objective(cost2)
    status = tab.run(np.ones(width, dtype=bool))
    if status == LpStatus.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED, np.full(n, np.nan), float("inf"),
                          pivots=tab.pivots)

    values = np.zeros(width)
    values[tab.basis] = np.maximum(tab.T[:, -1], 0.0)
    x = values[:n].copy()
    x[free_idx] -= values[n: n_struct]
    duals = tab.z[n_struct: n_struct + m].copy()

    logger.debug(f"LP solved: {m} rows, {n} vars, {tab.pivots} pivots")
    return LpSolution(LpStatus.OPTIMAL, x, float(c @ x), duals=duals, pivots=tab.pivots)
