"""
Discrete memoryless channels, the concrete channels used throughout the package,
and the unassisted one-shot success probability of sending one bit.
"""
import itertools
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from bitassist.core.errors import InputValidationError
from bitassist.models.channel import Channel

MAX_BRUTE_FORCE_INPUTS = 64
MAX_HASHING_M = 8


@dataclass(frozen=True)
class BruteForceResult:
    value: float
    pair: Tuple[int, int]


# === Concrete channels ===


def make_prevedel() -> Channel:
    """The 4 x 6 channel whose rows place 1/3 on three of six outputs"""
    third = 1.0 / 3.0
    pattern = [
        [1, 0, 1, 0, 1, 0],
        [1, 0, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1],
        [0, 1, 0, 1, 1, 0],
    ]
    return Channel.build(
        np.array(pattern, dtype=float) * third,
        inputs=[str(i) for i in range(1, 5)],
        outputs=[str(j) for j in range(1, 7)],
        name="prevedel",
    )


def inner_product_mod2(i: int, j: int) -> int:
    return bin(i & j).count("1") & 1


def make_hashing_channel(m: int) -> Channel:
    """
    Input i in F_2^m; output (j, b_i . b_j) with j uniform over the nonzero vectors.

    Outputs are ordered lexicographically by (j, t), labelled "j:t".
    """
    if not 1 <= m <= MAX_HASHING_M:
        raise InputValidationError(f"Hashing channel needs 1 <= m <= {MAX_HASHING_M}, got {m}")
    size = 2**m
    nonzero = size - 1
    matrix = np.zeros((size, 2 * nonzero))
    for i in range(size):
        for j in range(1, size):
            t = inner_product_mod2(i, j)
            matrix[i, 2 * (j - 1) + t] = 1.0 / nonzero
    outputs = [f"{j}:{t}" for j in range(1, size) for t in (0, 1)]
    return Channel.build(
        matrix, inputs=[str(i) for i in range(size)], outputs=outputs, name=f"hashing-m{m}"
    )


def make_uniform(num_inputs: int, num_outputs: int) -> Channel:
    """Every row uniform: carries no information"""
    matrix = np.full((num_inputs, num_outputs), 1.0 / num_outputs)
    return Channel.build(matrix, name="uniform")


def make_noiseless(k: int = 2) -> Channel:
    return Channel.build(np.eye(k), name=f"noiseless-{k}")


# === Unassisted success ===


def diam1(rows: Sequence[Sequence[float]]) -> float:
    """Largest pairwise 1-norm distance"""
    r = np.atleast_2d(np.asarray(rows, dtype=float))
    if r.shape[0] == 0:
        raise InputValidationError("diam1 needs at least one vector")
    return float(np.abs(r[:, None, :] - r[None, :, :]).sum(axis=-1).max())


def succ_unassisted(ch: Channel) -> float:
    """1/2 + Diam_1(rows) / 4"""
    return 0.5 + diam1(ch.rows) / 4


def brute_force_succ(ch: Channel) -> BruteForceResult:
    """
    Best deterministic encoder pair with maximum-likelihood decoding.

    Ties go to the lexicographically smallest ordered pair; a single-input
    channel returns (1/2, (0, 0)).
    """
    k = ch.num_inputs
    if k > MAX_BRUTE_FORCE_INPUTS:
        raise InputValidationError(
            f"Brute force limited to {MAX_BRUTE_FORCE_INPUTS} inputs, channel has {k}"
        )
    if k == 1:
        return BruteForceResult(0.5, (0, 0))

    best_value, best_pair = -1.0, (0, 1)
    for x0, x1 in itertools.permutations(range(k), 2):
        value = 0.5 * float(np.maximum(ch.rows[x0], ch.rows[x1]).sum())
        if value > best_value + 1e-15:
            best_value, best_pair = value, (x0, x1)
    return BruteForceResult(best_value, best_pair)
