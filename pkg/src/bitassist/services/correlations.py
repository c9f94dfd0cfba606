"""
Two-part correlations (boxes) p(p, q | r, s).

Alice feeds r and reads p, Bob feeds s and reads q. Tables are indexed
[r][s][p][q]. Binary boxes have all four alphabets of size 2.
"""
import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from bitassist.core.errors import (
    CertificateMismatchError,
    DimensionMismatchError,
    InputValidationError,
)
from bitassist.models.correlation import NORMALIZATION_TOL, Correlation
from bitassist.services.channels import inner_product_mod2
from bitassist.services.hermitian import HermitianOp, is_psd, projector_from_angle
from bitassist.services.lp import LinearProgram, solve

NONSIGNALING_TOL = 1e-9
MAX_DEVICE_M = 6

# Parity functions g_j(r, s) in the order used by f_1..f_4 and the PR-box index
PARITIES = (
    lambda r, s: r & s,
    lambda r, s: (1 - r) & s,
    lambda r, s: r & (1 - s),
    lambda r, s: (1 - r) & (1 - s),
)


@dataclass
class LocalFractionResult:
    alpha: float
    weights: np.ndarray
    residual: Optional[Correlation]


def require_binary(d: Correlation) -> None:
    if not d.is_binary:
        raise InputValidationError(f"Expected a binary box, got alphabet sizes {d.sizes}")


def mixture(boxes: Sequence[Correlation], weights: Sequence[float], name: str = "mixture") -> Correlation:
    weights = np.asarray(weights, dtype=float)
    if len(boxes) != len(weights) or not len(boxes):
        raise DimensionMismatchError("mixture needs one weight per box")
    table = np.tensordot(weights / weights.sum(), np.stack([b.table for b in boxes]), axes=1)
    return Correlation(boxes[0].alphabets, table, name)


# === Non-signaling ===


def is_nonsignaling(d: Correlation, tol: float = NONSIGNALING_TOL) -> bool:
    """Bob's marginal independent of r and Alice's marginal independent of s"""
    bob = d.bob_marginal()
    alice = d.alice_marginal()
    bob_ok = np.max(np.abs(bob - bob[:1])) <= tol
    alice_ok = np.max(np.abs(alice - alice[:, :1])) <= tol
    return bool(bob_ok and alice_ok)


# === Binary boxes ===


def deterministic_boxes() -> List[Correlation]:
    """All 16 local-deterministic binary boxes; index 4*f + g with f, g as (out(0), out(1))"""
    functions = list(itertools.product((0, 1), repeat=2))
    boxes = []
    for f in functions:
        for g in functions:
            table = np.zeros((2, 2, 2, 2))
            for r, s in itertools.product((0, 1), repeat=2):
                table[r, s, f[r], g[s]] = 1.0
            boxes.append(Correlation.build(table, name=f"det-{f[0]}{f[1]}-{g[0]}{g[1]}"))
    return boxes


def chsh_values(d: Correlation) -> Tuple[float, float, float, float]:
    """f_j = sum (-1)^(p xor q xor g_j(r, s)) p(pq|rs) for j = 1..4"""
    require_binary(d)
    values = []
    for parity in PARITIES:
        total = 0.0
        for r, s, p, q in itertools.product((0, 1), repeat=4):
            sign = -1.0 if (p ^ q ^ parity(r, s)) else 1.0
            total += sign * d.table[r, s, p, q]
        values.append(total)
    return tuple(values)


def pr_box(j: int, sign: str = "+") -> Correlation:
    """PR box P_j^+/-: p xor q = g_j(r, s) (xor 1 for '-') with probability 1/2 each"""
    if j not in (1, 2, 3, 4):
        raise InputValidationError(f"PR box index must be 1..4, got {j}")
    if sign not in ("+", "-"):
        raise InputValidationError(f"PR box sign must be '+' or '-', got {sign!r}")
    flip = 0 if sign == "+" else 1
    table = np.zeros((2, 2, 2, 2))
    for r, s, p, q in itertools.product((0, 1), repeat=4):
        if p ^ q == PARITIES[j - 1](r, s) ^ flip:
            table[r, s, p, q] = 0.5
    return Correlation.build(table, name=f"pr-{j}{sign}")


def fixed_output_box(sizes: Tuple[int, int, int, int], p0: int = 0, q0: int = 0) -> Correlation:
    """Both parts ignore their inputs and emit fixed symbols"""
    table = np.zeros(sizes)
    table[:, :, p0, q0] = 1.0
    return Correlation.build(table, name="fixed-output")


def uniform_box(sizes: Tuple[int, int, int, int]) -> Correlation:
    return Correlation.build(np.full(sizes, 1.0 / (sizes[2] * sizes[3])), name="uniform")


# === Quantum boxes ===


def _validate_povm(povm: Sequence[HermitianOp], dim: int, where: str) -> None:
    total = np.zeros((dim, dim), dtype=complex)
    for k, element in enumerate(povm):
        if element.dim != dim:
            raise DimensionMismatchError(f"{where} element {k} has dim {element.dim}, expected {dim}")
        if not is_psd(element):
            raise InputValidationError(f"{where} element {k} is not positive semidefinite")
        total = total + element.matrix
    if np.max(np.abs(total - np.eye(dim))) > NORMALIZATION_TOL:
        raise InputValidationError(f"{where} does not sum to the identity")


def quantum_correlation(
    state: HermitianOp,
    alice_povms: Sequence[Sequence[HermitianOp]],
    bob_povms: Sequence[Sequence[HermitianOp]],
    name: str = "quantum",
) -> Correlation:
    """
    p(p, q | r, s) = Tr((A_r^p (x) B_s^q) state) for a state on C^n (x) C^n.

    Every POVM of a party must have the same number of outcomes.
    """
    n = int(round(math.sqrt(state.dim)))
    if n * n != state.dim:
        raise DimensionMismatchError(f"State dimension {state.dim} is not a square")
    if not is_psd(state) or abs(state.trace() - 1.0) > NORMALIZATION_TOL:
        raise InputValidationError("State must be PSD with unit trace")
    for side, povms in (("Alice", alice_povms), ("Bob", bob_povms)):
        if not povms or len({len(p) for p in povms}) != 1:
            raise InputValidationError(f"{side}'s POVMs must share one outcome count")
        for r, povm in enumerate(povms):
            _validate_povm(povm, n, f"{side} POVM for input {r}")

    A = np.array([[e.matrix for e in povm] for povm in alice_povms])
    B = np.array([[e.matrix for e in povm] for povm in bob_povms])
    rho = state.matrix.reshape(n, n, n, n)
    # rho[i, k, j, l] = <i k| rho |j l>, Tr((A (x) B) rho) = A[j, i] B[l, k] rho[i, k, j, l]
    table = np.einsum("rpji,sqlk,ikjl->rspq", A, B, rho).real
    table = np.maximum(table, 0.0)
    return Correlation.build(table, name=name)


def bell_state() -> HermitianOp:
    """|Phi+> = (|00> + |11>)/sqrt(2) as a density operator"""
    phi = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return HermitianOp(np.outer(phi, phi.conj()))


def projective_measurement(theta: float) -> List[HermitianOp]:
    """Outcome 0 is P_theta, outcome 1 its complement"""
    p = projector_from_angle(theta).op
    return [p, HermitianOp.identity(2) - p]


def tsirelson_box() -> Correlation:
    """Bell state with Alice at angles (0, pi/4) and Bob at (pi/8, -pi/8): f_1 = 2 sqrt(2)"""
    alice = [projective_measurement(0.0), projective_measurement(math.pi / 4)]
    bob = [projective_measurement(math.pi / 8), projective_measurement(-math.pi / 8)]
    return quantum_correlation(bell_state(), alice, bob, name="tsirelson")


# === Local fraction ===


def local_fraction(d: Correlation) -> LocalFractionResult:
    """
    Largest alpha with d = alpha L + (1 - alpha) F, L local and F non-signaling.

    Solved as: maximize sum q_i  s.t.  sum q_i L_i <= d entrywise, q >= 0, over
    the 16 deterministic boxes L_i. The residual F is checked to be a valid
    non-signaling box.
    """
    require_binary(d)
    if not is_nonsignaling(d):
        raise InputValidationError(f"Local fraction needs a non-signaling box, '{d.name}' signals")

    boxes = deterministic_boxes()
    L = np.stack([b.table.ravel() for b in boxes], axis=1)
    target = d.table.ravel()
    solution = solve(LinearProgram(np.ones(len(boxes)), L, target))
    if not solution.optimal:
        raise CertificateMismatchError(f"Local-fraction LP ended with {solution.status.value}")

    weights = np.maximum(solution.x, 0.0)
    alpha = float(min(1.0, weights.sum()))
    residual = None
    if alpha < 1.0 - 1e-9:
        rest = (target - L @ weights) / (1.0 - alpha)
        if np.min(rest) < -1e-8:
            raise CertificateMismatchError("Local-fraction residual has negative entries")
        rest = np.maximum(rest, 0.0).reshape(d.table.shape)
        rest = rest / rest.sum(axis=(2, 3), keepdims=True)
        residual = Correlation(d.alphabets, rest, name=f"{d.name}-residual")
        if not is_nonsignaling(residual, tol=1e-7):
            raise CertificateMismatchError("Local-fraction residual is signaling")
    return LocalFractionResult(alpha=alpha, weights=weights, residual=residual)


# === The hashing device ===


def device_E(m: int) -> Correlation:
    """
    Two-part device for the hashing channel.

    Alice: input a, output a uniform vector of F_2^m whose first (lowest) bit is a.
    Bob: input (w, r) with w nonzero, output a xor r xor (w . vector).
    """
    if not 1 <= m <= MAX_DEVICE_M:
        raise InputValidationError(f"device_E needs 1 <= m <= {MAX_DEVICE_M}, got {m}")
    size = 2**m
    S = [(w, r) for w in range(1, size) for r in (0, 1)]
    table = np.zeros((2, len(S), size, 2))
    weight = 1.0 / 2 ** (m - 1)
    for a in (0, 1):
        for s_idx, (w, r) in enumerate(S):
            for vec in range(size):
                if vec & 1 != a:
                    continue
                q = a ^ r ^ inner_product_mod2(w, vec)
                table[a, s_idx, vec, q] = weight
    alphabets = (
        ("0", "1"),
        tuple(f"{w}:{r}" for w, r in S),
        tuple(str(vec) for vec in range(size)),
        ("0", "1"),
    )
    return Correlation(alphabets, table, name=f"device-e-m{m}")
