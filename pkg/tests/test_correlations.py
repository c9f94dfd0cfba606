import logging
import math

import numpy as np
import pytest

from bitassist.core.errors import DimensionMismatchError, InputValidationError
from bitassist.models.correlation import Correlation
from bitassist.services.correlations import (
    bell_state,
    chsh_values,
    deterministic_boxes,
    device_E,
    fixed_output_box,
    is_nonsignaling,
    local_fraction,
    mixture,
    pr_box,
    projective_measurement,
    quantum_correlation,
    tsirelson_box,
    uniform_box,
)
from bitassist.services.hermitian import HermitianOp
from bitassist.services.sampling import (
    random_local_box,
    random_ns_box,
    random_quantum_box,
    random_real_measurement_box,
)

TSIRELSON_LOC = 2 - math.sqrt(2)


@pytest.mark.parametrize("j", [1, 2, 3, 4])
@pytest.mark.parametrize("sign", ["+", "-"])
def test_pr_box_chsh(j, sign):
    values = chsh_values(pr_box(j, sign))
    expected = [0.0] * 4
    expected[j - 1] = 4.0 if sign == "+" else -4.0
    assert values == pytest.approx(expected, abs=1e-12)


def test_pr_box_arguments():
    with pytest.raises(InputValidationError):
        pr_box(5)
    with pytest.raises(InputValidationError):
        pr_box(1, "*")


def test_deterministic_boxes_are_local():
    boxes = deterministic_boxes()
    assert len(boxes) == 16
    assert len({b.name for b in boxes}) == 16
    for box in boxes:
        assert is_nonsignaling(box)
        assert max(abs(f) for f in chsh_values(box)) <= 2 + 1e-12
        assert local_fraction(box).alpha == pytest.approx(1.0, abs=1e-9)


def test_tsirelson_box():
    box = tsirelson_box()
    f = chsh_values(box)
    assert f[0] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert is_nonsignaling(box)
    assert local_fraction(box).alpha == pytest.approx(TSIRELSON_LOC, abs=1e-6)


def test_pr_box_has_no_local_part():
    result = local_fraction(pr_box(1, "+"))
    assert result.alpha == pytest.approx(0.0, abs=1e-9)
    assert result.residual is not None
    assert np.allclose(result.residual.table, pr_box(1, "+").table, atol=1e-9)


def test_local_fraction_of_noisy_pr_box():
    weight = 0.75
    box = mixture([uniform_box((2, 2, 2, 2)), pr_box(2, "-")], [1 - weight, weight])
    assert local_fraction(box).alpha == pytest.approx(2 - 2 * weight, abs=1e-8)
    below = mixture([uniform_box((2, 2, 2, 2)), pr_box(2, "-")], [0.6, 0.4])
    assert local_fraction(below).alpha == pytest.approx(1.0, abs=1e-8)


def test_local_fraction_decomposition_reconstructs(rng):
    tables = np.stack([b.table for b in deterministic_boxes()])
    for trial in range(30):
        box = random_ns_box(rng)
        result = local_fraction(box)
        rebuilt = np.tensordot(result.weights, tables, axes=1)
        if result.residual is not None:
            assert is_nonsignaling(result.residual, tol=1e-7)
            rebuilt = rebuilt + (1 - result.alpha) * result.residual.table
        assert np.allclose(rebuilt, box.table, atol=1e-8), f"trial {trial}"


def test_quantum_boxes_respect_local_fraction_floor(rng):
    for trial in range(100):
        if trial % 2:
            box = random_quantum_box(rng, entangled=trial % 4 == 1)
        else:
            box = random_real_measurement_box(rng)
        assert is_nonsignaling(box, tol=1e-9), f"trial {trial}"
        assert max(abs(f) for f in chsh_values(box)) <= 2 * math.sqrt(2) + 1e-9
        assert local_fraction(box).alpha >= TSIRELSON_LOC - 1e-6, f"trial {trial}"


def test_local_boxes_have_full_local_fraction(rng):
    for _ in range(10):
        assert local_fraction(random_local_box(rng)).alpha == pytest.approx(1.0, abs=1e-8)


def test_signaling_box_is_rejected():
    table = np.zeros((2, 2, 2, 2))
    for r in (0, 1):
        for s in (0, 1):
            table[r, s, 0, r] = 1.0  # Bob's output reveals r
    box = Correlation.build(table, name="signal")
    assert not is_nonsignaling(box)
    with pytest.raises(InputValidationError):
        local_fraction(box)


def test_local_fraction_needs_binary():
    with pytest.raises(InputValidationError):
        local_fraction(uniform_box((2, 2, 3, 2)))


def test_table_validation():
    with pytest.raises(InputValidationError, match="r=0"):
        Correlation.build(np.full((2, 2, 2, 2), 0.3))
    negative = np.full((1, 1, 2, 2), 0.25)
    negative[0, 0, 0, 0] = -0.1
    negative[0, 0, 0, 1] = 0.6
    with pytest.raises(InputValidationError, match="Negative"):
        Correlation.build(negative)
    with pytest.raises(DimensionMismatchError):
        Correlation((("0",), ("0",), ("0",), ("0", "1")), np.ones((1, 1, 1, 1)))


def test_tiny_negative_entries_are_clamped(caplog):
    table = np.full((2, 2, 2, 2), 0.25)
    table[:, :, 0, 0] = -1e-15
    table[:, :, 1, 1] = 0.5 + 1e-15
    assert np.allclose(table.sum(axis=(2, 3)), 1.0, atol=1e-14)
    with caplog.at_level(logging.WARNING):
        box = Correlation.build(table)
    assert box.table.min() == 0.0
    assert np.allclose(box.table[:, :, 1, 1], 0.5)
    assert "Clamped 4 tiny negative entries" in caplog.text


def test_quantum_correlation_validation():
    alice = [projective_measurement(0.0)]
    with pytest.raises(InputValidationError):
        quantum_correlation(HermitianOp(np.eye(4)), alice, alice)
    bad = [[HermitianOp(np.eye(2)), HermitianOp(np.eye(2))]]
    with pytest.raises(InputValidationError):
        quantum_correlation(bell_state(), bad, alice)
    with pytest.raises(DimensionMismatchError):
        quantum_correlation(HermitianOp(np.eye(3) / 3), alice, alice)


def test_bell_state_perfect_correlation():
    box = quantum_correlation(bell_state(), [projective_measurement(0.3)], [projective_measurement(0.3)])
    assert box.table[0, 0, 0, 0] + box.table[0, 0, 1, 1] == pytest.approx(1.0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_device_e(m):
    box = device_E(m)
    assert box.sizes == (2, 2 * (2**m - 1), 2**m, 2)
    assert is_nonsignaling(box)
    # Alice's output always carries a in its lowest bit
    for a in (0, 1):
        marginal = box.alice_marginal()[a, 0]
        assert marginal[[v for v in range(2**m) if v & 1 != a]].sum() == 0.0


def test_device_e_range():
    with pytest.raises(InputValidationError):
        device_E(0)


def test_fixed_output_box():
    box = fixed_output_box((3, 2, 2, 4), p0=1, q0=3)
    assert is_nonsignaling(box)
    assert box.table[2, 1, 1, 3] == 1.0
