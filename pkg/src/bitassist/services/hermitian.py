"""
Small dense Hermitian linear algebra.

Operators are immutable wrappers around complex128 numpy arrays. Eigenvalues
come from a cyclic complex Jacobi rotation method, and 2x2 operators have a
Bloch form (trace, Pauli coefficients) with the Pauli ordering fixed here as
(X, Y, Z):

    H = (t / 2) * I + v_x * X + v_y * Y + v_z * Z,    ||H|| = |t| / 2 + ||v||
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from bitassist.core.config import settings
from bitassist.core.errors import DimensionMismatchError, InputValidationError, SolverError

HERMITICITY_TOL = 1e-12
PROJECTOR_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

Scalar = Union[int, float]


@dataclass(frozen=True, eq=False)
class HermitianOp:
    """An n x n Hermitian operator; symmetrized and read-only after construction"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionMismatchError(f"Expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputValidationError("Operator has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(m))))
        skew = float(np.max(np.abs(m - m.conj().T)))
        if skew > HERMITICITY_TOL * scale:
            raise InputValidationError(
                "Operator is not Hermitian", detail=f"max |h - h^dagger| = {skew:.3e}"
            )
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, n: int) -> "HermitianOp":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "HermitianOp":
        return cls(np.zeros((n, n), dtype=complex))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> List[float]:
        return eig_hermitian(self)

    def norm(self) -> float:
        return operator_norm(self)

    def _check_dim(self, other: "HermitianOp") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "HermitianOp") -> "HermitianOp":
        self._check_dim(other)
        return HermitianOp(self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOp") -> "HermitianOp":
        self._check_dim(other)
        return HermitianOp(self.matrix - other.matrix)

    def __neg__(self) -> "HermitianOp":
        return HermitianOp(-self.matrix)

    def __mul__(self, scalar: Scalar) -> "HermitianOp":
        return HermitianOp(float(scalar) * self.matrix)

    __rmul__ = __mul__

    def allclose(self, other: "HermitianOp", atol: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.matrix, other.matrix, atol=atol))

    def __repr__(self) -> str:
        return f"HermitianOp(dim={self.dim}, matrix={np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True)
class BlochForm:
    """Trace and (X, Y, Z) Pauli coefficients of a 2x2 Hermitian operator"""

    trace: float
    vec: Tuple[float, float, float]

    @property
    def vec_norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.vec))

    def operator_norm(self) -> float:
        return abs(self.trace) / 2 + self.vec_norm

    def reconstruct(self) -> HermitianOp:
        m = (self.trace / 2) * np.eye(2, dtype=complex)
        for coeff, pauli in zip(self.vec, PAULIS):
            m = m + coeff * pauli
        return HermitianOp(m)


@dataclass(frozen=True, eq=False)
class Projector:
    """An orthogonal projector (op @ op == op)"""

    op: HermitianOp

    def __post_init__(self):
        m = self.op.matrix
        residual = float(np.max(np.abs(m @ m - m)))
        if residual > PROJECTOR_TOL:
            raise InputValidationError(
                "Operator is not a projector", detail=f"max |P^2 - P| = {residual:.3e}"
            )

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def rank(self) -> int:
        return int(round(self.op.trace()))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix


# === Eigenvalues ===


def jacobi_eigh(
    matrix: np.ndarray,
    tol: float = None,
    max_sweeps: int = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic complex Jacobi eigen-decomposition of a Hermitian matrix.

    Each rotation first removes the phase of a[p, q] with a diagonal unitary,
    then applies a real Givens rotation in the (p, q) plane.

    Args:
        matrix: n x n Hermitian array
        tol: off-diagonal Frobenius threshold relative to max(1, ||a||_F)
        max_sweeps: sweep cap; exceeding it raises SolverError

    Returns:
        Tuple (eigenvalues ascending, unitary with eigenvectors as columns)
    """
    tol = settings.JACOBI_OFFDIAG_TOL if tol is None else tol
    max_sweeps = settings.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps

    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            w = np.diag(a).real.copy()
            order = np.argsort(w, kind="stable")
            return w[order], v[:, order]
        if sweep == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                a[:, q] *= phase.conjugate()
                a[q, :] *= phase
                v[:, q] *= phase.conjugate()

                theta = 0.5 * math.atan2(2.0 * mag, a[p, p].real - a[q, q].real)
                c, s = math.cos(theta), math.sin(theta)
                rot = np.array([[c, -s], [s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ rot
                a[p, q] = a[q, p] = 0.0

    raise SolverError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps (n={n})")


def eig_hermitian(h: HermitianOp) -> List[float]:
    """All eigenvalues of h in ascending order"""
    w, _ = jacobi_eigh(h.matrix)
    return [float(x) for x in w]


def operator_norm(h: HermitianOp) -> float:
    """Largest absolute eigenvalue"""
    w = eig_hermitian(h)
    return max(abs(w[0]), abs(w[-1]))


def min_eigenvalue(h: HermitianOp) -> float:
    return eig_hermitian(h)[0]


def is_psd(h: HermitianOp, tol: float = 1e-9) -> bool:
    return min_eigenvalue(h) >= -tol


# === Bloch form (n = 2) ===


def bloch_decompose(h: HermitianOp) -> BlochForm:
    """Trace and Pauli coefficients of a 2x2 operator"""
    if h.dim != 2:
        raise DimensionMismatchError(f"Bloch form needs dim 2, got {h.dim}")
    t = h.trace()
    vec = tuple(float(np.trace(h.matrix @ pauli).real) / 2 for pauli in PAULIS)
    return BlochForm(trace=t, vec=vec)


def bloch_arrays(ops: Sequence[HermitianOp]) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized Bloch form of a family: (traces shape (k,), vectors shape (k, 3))"""
    return bloch_stack(np.stack([op.matrix for op in ops]))


def bloch_stack(stack: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Bloch form of a raw (k, 2, 2) array"""
    t = np.trace(stack, axis1=1, axis2=2).real
    v = np.stack(
        [np.einsum("kij,ji->k", stack, pauli).real / 2 for pauli in PAULIS], axis=1
    )
    return t, v


def from_bloch_arrays(t: float, v: Iterable[float]) -> HermitianOp:
    return BlochForm(trace=float(t), vec=tuple(float(c) for c in v)).reconstruct()


# === Projectors ===


def projector_onto(vectors: np.ndarray) -> Projector:
    """Projector onto the span of the given columns (orthonormalized first)"""
    vecs = np.array(vectors, dtype=complex)
    if vecs.ndim == 1:
        vecs = vecs[:, None]
    if vecs.shape[1] == 0:
        return Projector(HermitianOp.zero(vecs.shape[0]))
    q, _ = np.linalg.qr(vecs)
    return Projector(HermitianOp(q @ q.conj().T))


def projector_from_angle(theta: float) -> Projector:
    """Projector onto cos(theta)|0> + sin(theta)|1>"""
    return projector_onto(np.array([math.cos(theta), math.sin(theta)]))


def projector_from_bloch(theta: float, phi: float) -> Projector:
    """Rank-1 qubit projector with Bloch direction (theta, phi)"""
    return projector_onto(
        np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
    )


def bloch_angles(p: Projector) -> Tuple[float, float]:
    """Inverse of projector_from_bloch for a rank-1 qubit projector"""
    form = bloch_decompose(p.op)
    x, y, z = (2 * c for c in form.vec)
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x) % (2 * math.pi)
    return theta, phi


def complement(p: Projector) -> Projector:
    """I - p"""
    return Projector(HermitianOp.identity(p.dim) - p.op)
