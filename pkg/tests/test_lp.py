import numpy as np
import pytest
from scipy.optimize import linprog

from bitassist.core.errors import DimensionMismatchError, InputValidationError
from bitassist.models.status import LpStatus
from bitassist.services.lp import LinearProgram, solve


def _oracle(lp: LinearProgram):
    bounds = [(None, None) if f else (0, None) for f in lp.free]
    return linprog(-lp.objective, A_ub=lp.A, b_ub=lp.b, bounds=bounds, method="highs")


def _feasible(lp: LinearProgram) -> bool:
    """HiGHS presolve can report infeasible for unbounded problems; ask with a zero objective"""
    bounds = [(None, None) if f else (0, None) for f in lp.free]
    zero = np.zeros_like(lp.objective)
    return linprog(zero, A_ub=lp.A, b_ub=lp.b, bounds=bounds, method="highs").status == 0


def test_textbook_problem():
    # max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18
    lp = LinearProgram([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    sol = solve(lp)
    assert sol.status == LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(36.0)
    assert np.allclose(sol.x, [2, 6])


def test_duals_satisfy_strong_duality():
    lp = LinearProgram([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    sol = solve(lp)
    assert np.all(sol.duals >= -1e-9)
    assert float(sol.duals @ lp.b) == pytest.approx(sol.objective_value, abs=1e-9)


def test_negative_rhs_uses_phase_one():
    # max -x - y st x + y >= 2 (as -x - y <= -2)
    sol = solve(LinearProgram([-1, -1], [[-1, -1]], [-2]))
    assert sol.optimal
    assert sol.objective_value == pytest.approx(-2.0)
    assert sol.duals == pytest.approx([1.0])


def test_infeasible():
    sol = solve(LinearProgram([1], [[1], [-1]], [1, -2]))
    assert sol.status == LpStatus.INFEASIBLE


def test_unbounded():
    sol = solve(LinearProgram([1, 0], [[-1, 1]], [1]))
    assert sol.status == LpStatus.UNBOUNDED


def test_free_variables():
    # max -t st t >= x - 3, t >= 3 - x, x free, t free
    lp = LinearProgram([0, -1], [[1, -1], [-1, -1]], [3, -3], free=[True, True])
    sol = solve(lp)
    assert sol.optimal
    assert sol.objective_value == pytest.approx(0.0, abs=1e-12)
    assert sol.x[0] == pytest.approx(3.0)


def test_degenerate_problem_terminates():
    # classic cycling example under the largest-coefficient rule
    A = [[0.5, -5.5, -2.5, 9], [0.5, -1.5, -0.5, 1], [1, 0, 0, 0]]
    sol = solve(LinearProgram([10, -57, -9, -24], A, [0, 0, 1]))
    assert sol.optimal
    assert sol.objective_value == pytest.approx(1.0)


def test_random_problems_match_highs(rng):
    for trial in range(60):
        m, n = rng.integers(2, 7), rng.integers(2, 7)
        A = rng.normal(size=(m, n))
        b = rng.uniform(-1, 3, size=m)
        c = rng.normal(size=n)
        free = rng.random(n) < 0.3
        lp = LinearProgram(c, A, b, free=free)
        ours = solve(lp)
        ref = _oracle(lp)
        if ref.status == 0:
            assert ours.optimal, f"trial {trial}: expected optimal, got {ours.status}"
            assert ours.objective_value == pytest.approx(-ref.fun, abs=1e-7)
            assert np.all(lp.A @ ours.x <= lp.b + 1e-7)
            if not lp.free.any():
                assert float(ours.duals @ lp.b) == pytest.approx(-ref.fun, abs=1e-6)
        elif ref.status in (2, 3):
            expected = LpStatus.UNBOUNDED if _feasible(lp) else LpStatus.INFEASIBLE
            assert ours.status == expected, f"trial {trial}: HiGHS status {ref.status}"


def test_shape_validation():
    with pytest.raises(DimensionMismatchError):
        LinearProgram([1, 1], [[1, 1]], [1], free=[True])
    with pytest.raises(InputValidationError):
        LinearProgram([np.nan], [[1]], [1])
