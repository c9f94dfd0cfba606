import itertools

import numpy as np
import pytest

from bitassist.core.errors import BudgetExceededError, DimensionMismatchError, InputValidationError
from bitassist.models.channel import Channel
from bitassist.models.strategy import ProtocolStrategy
from bitassist.services.assist import succ_ns
from bitassist.services.channels import make_hashing_channel, make_noiseless, succ_unassisted
from bitassist.services.correlations import (
    device_E,
    fixed_output_box,
    pr_box,
    tsirelson_box,
    uniform_box,
)
from bitassist.services.protocol import (
    brute_force_decoders,
    check_bound_thm5,
    check_bound_thm6,
    enumeration_size,
    optimal_assisted_succ,
    optimal_decoders,
    simulate,
)
from bitassist.services.sampling import random_channel, random_local_box, random_ns_box


def test_hashing_with_device_e_is_perfect(hashing2):
    device = device_E(2)
    result = optimal_assisted_succ(hashing2, device)
    assert result.value == pytest.approx(1.0, abs=1e-12)
    assert simulate(hashing2, device, result.strategy) == pytest.approx(1.0, abs=1e-12)
    assert result.bound_thm5 == pytest.approx(1.0, abs=1e-12)
    assert result.encoders_checked == 4 * 4**8
    check = check_bound_thm5(hashing2, device, result.value)
    assert check.holds
    assert check.extra["effective_inputs"] == 4


def test_fixed_output_device_adds_nothing(rng):
    for trial in range(20):
        ch = random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        result = optimal_assisted_succ(ch, fixed_output_box((2, 3, 1, 1)))
        assert result.value == pytest.approx(succ_unassisted(ch), abs=1e-12), f"trial {trial}"


def test_budget_overflow(hashing2):
    with pytest.raises(BudgetExceededError) as info:
        optimal_assisted_succ(hashing2, device_E(2), budget=1000)
    assert info.value.cardinality == enumeration_size(hashing2, device_E(2))
    assert info.value.budget == 1000


def test_alphabet_limits():
    ch = make_noiseless(2)
    with pytest.raises(InputValidationError):
        optimal_assisted_succ(ch, uniform_box((5, 2, 2, 2)))


def test_decoder_formula_matches_enumeration(rng):
    boxes = [pr_box(1, "+"), tsirelson_box(), random_ns_box(rng), uniform_box((2, 2, 2, 2))]
    for trial in range(12):
        ch = random_channel(rng, 3, 2)
        box = boxes[trial % len(boxes)]
        e1 = tuple(int(v) for v in rng.integers(0, 2, size=2))
        e2 = tuple(tuple(int(v) for v in rng.integers(0, 3, size=2)) for _ in range(2))
        value, d1, d2 = optimal_decoders(ch, box, e1, e2)
        assert value == pytest.approx(brute_force_decoders(ch, box, e1, e2), abs=1e-12)
        assert simulate(ch, box, ProtocolStrategy(e1, e2, d1, d2)) == pytest.approx(value, abs=1e-12)


def test_optimum_matches_full_enumeration():
    ch = Channel.build([[0.8, 0.2], [0.3, 0.7]])
    box = pr_box(1, "+")
    best = 0.0
    for e1 in itertools.product(range(2), repeat=2):
        for e2 in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
            best = max(best, brute_force_decoders(ch, box, e1, e2))
    assert optimal_assisted_succ(ch, box).value == pytest.approx(best, abs=1e-12)


def test_random_pairs_respect_bounds(rng):
    for trial in range(100):
        ch = random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        box = random_ns_box(rng) if trial % 3 else random_local_box(rng)
        result = optimal_assisted_succ(ch, box)
        base = succ_unassisted(ch)
        assert result.value >= base - 1e-12, f"trial {trial}"
        assert result.value <= succ_ns(ch).value + 1e-8, f"trial {trial}"
        assert check_bound_thm5(ch, box, result.value).holds, f"trial {trial}"
        assert check_bound_thm6(ch, box, result.value).holds, f"trial {trial}"
        assert result.bound_thm6 is not None


def test_local_device_bound_is_unassisted(rng):
    ch = random_channel(rng, 3, 3)
    check = check_bound_thm6(ch, random_local_box(rng), succ_unassisted(ch))
    assert check.extra["loc"] == pytest.approx(1.0, abs=1e-8)
    assert check.bound == pytest.approx(succ_unassisted(ch), abs=1e-8)


def test_thm5_forms():
    ch = make_hashing_channel(3)
    check = check_bound_thm5(ch, pr_box(1, "+"), 0.9)
    base = succ_unassisted(ch) - 0.5
    assert check.extra["effective_inputs"] == 4
    assert check.bound == pytest.approx(0.5 + 1.5 * base)
    assert check.extra["bound_by_outputs"] == pytest.approx(0.5 + 1.5 * base)
    assert check.bound <= check.extra["bound_by_outputs"] + 1e-15


def test_thm6_needs_binary_nonsignaling(hashing2):
    with pytest.raises(InputValidationError):
        check_bound_thm6(hashing2, device_E(2), 1.0)


def test_result_is_deterministic(rng):
    ch = random_channel(rng, 3, 3)
    box = random_ns_box(rng)
    first = optimal_assisted_succ(ch, box)
    second = optimal_assisted_succ(ch, box)
    assert first.strategy == second.strategy
    assert first.value == second.value


def test_strategy_validation():
    ch = make_noiseless(2)
    box = pr_box(1, "+")
    with pytest.raises(DimensionMismatchError):
        simulate(ch, box, ProtocolStrategy((0, 0), ((0, 1), (1, 0)), (0,), ((0, 1),)))
    with pytest.raises(InputValidationError):
        simulate(ch, box, ProtocolStrategy((0, 2), ((0, 1), (1, 0)), (0, 0), ((0, 1), (0, 1))))


def test_noiseless_channel_simulation():
    ch = make_noiseless(2)
    box = fixed_output_box((1, 1, 1, 1))
    strat = ProtocolStrategy((0, 0), ((0,), (1,)), (0, 0), ((0,), (1,)))
    assert simulate(ch, box, strat) == pytest.approx(1.0)
    assert np.isclose(optimal_assisted_succ(ch, box).value, 1.0)
