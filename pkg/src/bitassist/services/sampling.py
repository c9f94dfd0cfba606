"""
Seeded random instances for property sweeps and `verify-bounds --random`.
"""
import math
from typing import List

import numpy as np
from scipy.stats import unitary_group

from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.services.correlations import (
    bell_state,
    deterministic_boxes,
    mixture,
    pr_box,
    projective_measurement,
    quantum_correlation,
)
from bitassist.services.hermitian import HermitianOp, Projector, projector_from_bloch


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, *stream])


def random_channel(rng: np.random.Generator, num_inputs: int, num_outputs: int) -> Channel:
    """Rows drawn from a flat Dirichlet, with an occasional zero pattern"""
    rows = rng.dirichlet(np.ones(num_outputs), size=num_inputs)
    if num_outputs > 1 and rng.random() < 0.3:
        mask = rng.random(rows.shape) < 0.3
        mask[np.arange(num_inputs), rng.integers(num_outputs, size=num_inputs)] = False
        rows = np.where(mask, 0.0, rows)
    return Channel.build(rows, name="random", renormalize=True)


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> HermitianOp:
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianOp(scale * (G + G.conj().T) / 2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    return unitary_group.rvs(n, random_state=rng)


def random_density(rng: np.random.Generator, n: int) -> HermitianOp:
    """Ginibre-distributed density operator"""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = G @ G.conj().T
    return HermitianOp(rho / np.trace(rho).real)


def random_qubit_projector(rng: np.random.Generator) -> Projector:
    """Rank 0, 1 or 2 with probabilities 1/4, 1/2, 1/4; rank-1 uniform on the sphere"""
    kind = rng.choice(4)
    if kind == 0:
        return Projector(HermitianOp.zero(2))
    if kind == 1:
        return Projector(HermitianOp.identity(2))
    theta = math.acos(rng.uniform(-1.0, 1.0))
    return projector_from_bloch(theta, rng.uniform(0.0, 2 * math.pi))


def random_local_box(rng: np.random.Generator) -> Correlation:
    boxes = deterministic_boxes()
    return mixture(boxes, rng.dirichlet(np.ones(len(boxes))), name="random-local")


def random_ns_box(rng: np.random.Generator) -> Correlation:
    """A random mixture of a local box and one of the eight PR boxes"""
    pr = pr_box(int(rng.integers(1, 5)), "+" if rng.random() < 0.5 else "-")
    weight = rng.uniform()
    return mixture([random_local_box(rng), pr], [1 - weight, weight], name="random-ns")


def random_quantum_box(rng: np.random.Generator, entangled: bool = False) -> Correlation:
    """
    Two-qubit state (Ginibre, or the Bell state rotated locally) with two
    random projective measurements per side.
    """
    if entangled:
        U = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
        state = HermitianOp(U @ bell_state().matrix @ U.conj().T)
    else:
        state = random_density(rng, 4)

    def side() -> List[List[HermitianOp]]:
        povms = []
        for _ in range(2):
            p = projector_from_bloch(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))
            povms.append([p.op, HermitianOp.identity(2) - p.op])
        return povms

    return quantum_correlation(state, side(), side(), name="random-quantum")


def random_real_measurement_box(rng: np.random.Generator) -> Correlation:
    """Bell state with real-plane measurement angles"""
    angles = rng.uniform(0, math.pi, size=4)
    alice = [projective_measurement(angles[0]), projective_measurement(angles[1])]
    bob = [projective_measurement(angles[2]), projective_measurement(angles[3])]
    return quantum_correlation(bell_state(), alice, bob, name="random-real-quantum")
