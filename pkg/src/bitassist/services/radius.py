"""
Radius (Chebyshev center) computations.

Two norms are covered:

- 1-norm radius of real vectors, solved exactly as a linear program.
- Operator-norm radius Rad{H_i} = min_C max_i ||H_i - C|| of a small Hermitian
  family, solved by seeded projected-subgradient restarts, exact candidate
  centers, and a smooth epigraph polish. The reported radius is always the
  verified value max_i ||H_i - C|| at the returned center.

Every operator-norm result carries a dual lower bound: the pairwise bound
max ||H_i - H_j|| / 2 and, when the extremal eigenvectors at the center admit
one, an explicit feasible dual certificate (lambda, lambda') whose objective
sum_i Tr((lambda_i - lambda'_i) H_i) lower-bounds the radius by weak duality.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize, nnls

from bitassist.core.errors import (
    DimensionMismatchError,
    InfeasibleMultipliersError,
    InputValidationError,
)
from bitassist.schemas.options import SolverOptions
from bitassist.services.hermitian import (
    PAULIS,
    HermitianOp,
    bloch_arrays,
    bloch_stack,
    from_bloch_arrays,
    min_eigenvalue,
    operator_norm,
)
from bitassist.services.lp import LinearProgram, solve

logger = logging.getLogger(__name__)

MAX_RAD_DIM = 4
MAX_RAD_COUNT = 16
MAX_RAD1_COUNT = 64
MAX_RAD1_LENGTH = 256
PSD_TOL = 1e-9
EQUALITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Rad1Result:
    radius: float
    center: np.ndarray


@dataclass(frozen=True, eq=False)
class RadOpResult:
    """Radius, the center achieving it, and a certified lower bound"""

    radius: float
    center: HermitianOp
    dual_lower_bound: float
    lambdas: Optional[List[HermitianOp]] = None
    lambdas_prime: Optional[List[HermitianOp]] = None

    @property
    def gap(self) -> float:
        return self.radius - self.dual_lower_bound

    @property
    def has_certificate(self) -> bool:
        return self.lambdas is not None


# === 1-norm radius ===


def rad1(vectors: Sequence[Sequence[float]]) -> Rad1Result:
    """
    min_c max_x ||n_x - c||_1 as an LP over (c, e, r):

        maximize -r  s.t.  sum_y e_xy <= r,  e_xy >= n_xy - c_y,  e_xy >= c_y - n_xy
    """
    rows = np.atleast_2d(np.asarray(vectors, dtype=float))
    count, k = rows.shape
    if count == 0 or k == 0:
        raise InputValidationError("rad1 needs at least one non-empty vector")
    if count > MAX_RAD1_COUNT or k > MAX_RAD1_LENGTH:
        raise InputValidationError(
            f"rad1 limited to {MAX_RAD1_COUNT} vectors of length {MAX_RAD1_LENGTH}, "
            f"got {count} of length {k}"
        )

    n_e = count * k
    n_vars = k + n_e + 1
    r_col = n_vars - 1

    A = np.zeros((count + 2 * n_e, n_vars))
    b = np.zeros(count + 2 * n_e)
    for x in range(count):
        A[x, k + x * k: k + (x + 1) * k] = 1.0
        A[x, r_col] = -1.0
    e_idx = np.arange(n_e)
    coord = e_idx % k
    lower = count + e_idx
    upper = count + n_e + e_idx
    A[lower, k + e_idx] = -1.0
    A[lower, coord] = -1.0
    b[lower] = -rows.ravel()
    A[upper, k + e_idx] = -1.0
    A[upper, coord] = 1.0
    b[upper] = rows.ravel()

    objective = np.zeros(n_vars)
    objective[r_col] = -1.0
    free = np.zeros(n_vars, dtype=bool)
    free[:k] = True

    solution = solve(LinearProgram(objective, A, b, free))
    if not solution.optimal:
        # The LP is always feasible and bounded below by 0
        raise InputValidationError(f"rad1 LP ended with status {solution.status.value}")

    center = solution.x[:k]
    radius = float(np.abs(rows - center).sum(axis=1).max())
    if abs(radius + solution.objective_value) > 1e-8:
        logger.warning(
            f"rad1 LP value {-solution.objective_value:.12g} differs from verified radius "
            f"{radius:.12g}"
        )
    return Rad1Result(radius=radius, center=center)


# === Operator-norm radius: validation and shared helpers ===


def _validate_family(ops: Sequence[HermitianOp]) -> int:
    if not ops:
        raise InputValidationError("Radius needs at least one operator")
    n = ops[0].dim
    for i, op in enumerate(ops):
        if op.dim != n:
            raise DimensionMismatchError(f"Operator {i} has dim {op.dim}, expected {n}")
    if n > MAX_RAD_DIM:
        raise DimensionMismatchError(f"Radius supports dim <= {MAX_RAD_DIM}, got {n}")
    if len(ops) > MAX_RAD_COUNT:
        raise InputValidationError(f"Radius supports at most {MAX_RAD_COUNT} operators")
    return n


def pairwise_bound(ops: Sequence[HermitianOp]) -> Tuple[float, Tuple[int, int]]:
    """max_{i,j} ||H_i - H_j|| / 2 and the (lowest-index) farthest pair"""
    best, pair = 0.0, (0, 0)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            dist = operator_norm(ops[i] - ops[j])
            if dist > 2 * best + 1e-15:
                best, pair = dist / 2, (i, j)
    return best, pair


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([seed, restart])


def _step(opts: SolverOptions, k: int, scale: float) -> float:
    return scale * opts.step_a / (k + opts.step_b)


# === Qubit path: Bloch coordinates with the trace offset eliminated ===


def qubit_value(t: np.ndarray, v: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Best value over tau for fixed Pauli part(s) w of the center.

    With d_i = ||v_i - w||, A = max(d_i + t_i/2), B = max(d_i - t_i/2), the
    optimal trace is tau = A - B and the value is (A + B) / 2.

    Returns:
        Tuple (values, taus), each with the leading shape of w
    """
    d = np.linalg.norm(w[..., None, :] - v, axis=-1)
    A = np.max(d + t / 2, axis=-1)
    B = np.max(d - t / 2, axis=-1)
    return (A + B) / 2, A - B


def _qubit_subgradient(
    t: np.ndarray, v: np.ndarray, starts: np.ndarray, opts: SolverOptions, scale: float
) -> Tuple[np.ndarray, np.ndarray]:
    """All restarts advance together; returns (best w per restart, best value per restart)"""
    w = starts.copy()
    restarts = np.arange(w.shape[0])
    best_w = w.copy()
    best_val, _ = qubit_value(t, v, w)

    for k in range(opts.iterations):
        diff = w[:, None, :] - v
        d = np.linalg.norm(diff, axis=-1)
        ia = np.argmax(d + t / 2, axis=1)
        ib = np.argmax(d - t / 2, axis=1)
        da = np.maximum(d[restarts, ia], 1e-300)[:, None]
        db = np.maximum(d[restarts, ib], 1e-300)[:, None]
        g = 0.5 * (diff[restarts, ia] / da + diff[restarts, ib] / db)
        w = w - _step(opts, k, scale) * g

        val, _ = qubit_value(t, v, w)
        improved = val < best_val
        best_val = np.where(improved, val, best_val)
        best_w[improved] = w[improved]

    return best_w, best_val


def _qubit_polish(t: np.ndarray, v: np.ndarray, w0: np.ndarray, tol: float) -> np.ndarray:
    """
    SLSQP on the smooth epigraph in z = (w, a, b):

        minimize (a + b)/2  s.t.  a - t_i/2 >= 0,  (a - t_i/2)^2 >= ||v_i - w||^2,
                                  b + t_i/2 >= 0,  (b + t_i/2)^2 >= ||v_i - w||^2
    """
    half = t / 2

    def constraints(z):
        w, a, b = z[:3], z[3], z[4]
        sq = np.sum((v - w) ** 2, axis=1)
        return np.concatenate([a - half, b + half, (a - half) ** 2 - sq, (b + half) ** 2 - sq])

    def constraints_jac(z):
        w, a, b = z[:3], z[3], z[4]
        k = len(t)
        jac = np.zeros((4 * k, 5))
        jac[:k, 3] = 1.0
        jac[k: 2 * k, 4] = 1.0
        jac[2 * k: 3 * k, :3] = 2 * (v - w)
        jac[2 * k: 3 * k, 3] = 2 * (a - half)
        jac[3 * k:, :3] = 2 * (v - w)
        jac[3 * k:, 4] = 2 * (b + half)
        return jac

    d0 = np.linalg.norm(v - w0, axis=1)
    z0 = np.concatenate([w0, [np.max(d0 + half), np.max(d0 - half)]])
    result = minimize(
        lambda z: 0.5 * (z[3] + z[4]),
        z0,
        jac=lambda z: np.array([0.0, 0.0, 0.0, 0.5, 0.5]),
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": constraints, "jac": constraints_jac}],
        options={"ftol": min(tol, 1e-9) * 1e-4, "maxiter": 500},
    )
    return np.asarray(result.x[:3], dtype=float)


@dataclass
class _QubitSolution:
    value: float
    tau: float
    w: np.ndarray
    origin: str


def solve_qubit_radius(t: np.ndarray, v: np.ndarray, opts: SolverOptions) -> _QubitSolution:
    """
    Radius of a qubit family given in Bloch arrays (t: traces, v: Pauli vectors).

    Candidate centers (each v_i, the mean, the farthest-pair midpoint) come
    first; if one meets the pairwise lower bound it is optimal. Otherwise the
    seeded subgradient restarts run and the best point is polished.
    """
    k = len(t)
    tol = opts.tolerance_for(2)
    dist = np.abs(t[:, None] - t[None, :]) / 2 + np.linalg.norm(
        v[:, None, :] - v[None, :, :], axis=-1
    )
    lower = float(dist.max()) / 2
    i, j = np.unravel_index(int(np.argmax(dist)), dist.shape)

    candidates = np.vstack([(v[i] + v[j]) / 2, v.mean(axis=0), v])
    values, _ = qubit_value(t, v, candidates)
    c = int(np.argmin(values))
    best_w, best_val, origin = candidates[c], float(values[c]), f"candidate-{c}"

    if best_val <= lower + 1e-15 or lower == 0.0:
        _, tau = qubit_value(t, v, best_w)
        return _QubitSolution(best_val, float(tau), best_w, origin)

    if opts.restarts and opts.iterations:
        scale = max(lower, 1e-12)
        starts = np.vstack(
            [
                v.mean(axis=0) + _restart_rng(opts.seed, r).normal(size=3) * scale
                for r in range(opts.restarts)
            ]
        )
        sg_w, sg_val = _qubit_subgradient(t, v, starts, opts, scale)
        r = int(np.argmin(sg_val))
        logger.debug(f"qubit subgradient: best restart {r} value {sg_val[r]:.12g}")
        if sg_val[r] < best_val:
            best_w, best_val, origin = sg_w[r], float(sg_val[r]), f"restart-{r}"

    for _ in range(3):
        try:
            polished = _qubit_polish(t, v, best_w, tol)
        except (ValueError, np.linalg.LinAlgError) as e:
            logger.warning(f"Radius polish failed: {e}")
            break
        value = float(qubit_value(t, v, polished)[0])
        if not value < best_val - 1e-15:
            break
        best_w, best_val, origin = polished, value, "polish"
        if best_val <= lower + 1e-15:
            break

    _, tau = qubit_value(t, v, best_w)
    return _QubitSolution(best_val, float(tau), np.asarray(best_w, float), origin)


# === General path (n = 3, 4): full Hermitian parametrization ===


def _hermitian_basis(n: int) -> np.ndarray:
    """Real-linear basis of n x n Hermitian matrices, shape (n^2, n, n)"""
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            basis.append(e)
            f = np.zeros((n, n), dtype=complex)
            f[i, j], f[j, i] = 1j, -1j
            basis.append(f)
    return np.stack(basis)


def _to_params(C: np.ndarray, basis: np.ndarray) -> np.ndarray:
    # Coordinates are Re C_ii, Re C_ij, Im C_ij; E_k has entry 1 (or i) at (i, j)
    n = C.shape[0]
    params = [C[i, i].real for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            params.extend([C[i, j].real, C[i, j].imag])
    return np.array(params)


def _general_value(H: np.ndarray, C: np.ndarray) -> np.ndarray:
    """max_i ||H_i - C||; C may carry leading batch dimensions"""
    w = np.linalg.eigvalsh(H - C[..., None, :, :])
    return np.max(np.maximum(w[..., -1], -w[..., 0]), axis=-1)


def _general_subgradient(
    H: np.ndarray, starts: np.ndarray, opts: SolverOptions, scale: float
) -> Tuple[np.ndarray, np.ndarray]:
    C = starts.copy()
    restarts = np.arange(C.shape[0])
    best_C = C.copy()
    best_val = _general_value(H, C)

    for k in range(opts.iterations):
        w, V = np.linalg.eigh(H - C[:, None, :, :])
        top, bottom = w[..., -1], -w[..., 0]
        istar = np.argmax(np.maximum(top, bottom), axis=1)
        use_top = top[restarts, istar] >= bottom[restarts, istar]
        vecs = np.where(
            use_top[:, None], V[restarts, istar, :, -1], V[restarts, istar, :, 0]
        )
        sign = np.where(use_top, -1.0, 1.0)
        G = sign[:, None, None] * np.einsum("ri,rj->rij", vecs, vecs.conj())
        C = C - _step(opts, k, scale) * G

        val = _general_value(H, C)
        improved = val < best_val
        best_val = np.where(improved, val, best_val)
        best_C[improved] = C[improved]

    return best_C, best_val


def _general_polish(H: np.ndarray, C0: np.ndarray, tol: float) -> np.ndarray:
    """SLSQP on (params(C), r): r >= lambda_max(H_i - C), r >= -lambda_min(H_i - C)"""
    n = C0.shape[0]
    basis = _hermitian_basis(n)
    m = basis.shape[0]

    def center(z):
        return np.tensordot(z[:m], basis, axes=1)

    def constraints(z):
        w = np.linalg.eigvalsh(H - center(z))
        return np.concatenate([z[m] - w[:, -1], z[m] + w[:, 0]])

    def constraints_jac(z):
        _, V = np.linalg.eigh(H - center(z))
        top, bottom = V[:, :, -1], V[:, :, 0]
        d_top = np.einsum("ki,bij,kj->kb", top.conj(), basis, top).real
        d_bottom = np.einsum("ki,bij,kj->kb", bottom.conj(), basis, bottom).real
        jac_top = np.hstack([d_top, np.ones((len(H), 1))])
        jac_bottom = np.hstack([-d_bottom, np.ones((len(H), 1))])
        return np.vstack([jac_top, jac_bottom])

    z0 = np.concatenate([_to_params(C0, basis), [float(_general_value(H, C0))]])
    objective_jac = np.zeros(m + 1)
    objective_jac[m] = 1.0
    result = minimize(
        lambda z: z[m],
        z0,
        jac=lambda z: objective_jac,
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": constraints, "jac": constraints_jac}],
        options={"ftol": min(tol, 1e-9) * 1e-4, "maxiter": 500},
    )
    return center(result.x)


def _solve_general_radius(H: np.ndarray, opts: SolverOptions) -> Tuple[np.ndarray, str]:
    k, n, _ = H.shape
    tol = opts.tolerance_for(n)
    dist = np.array(
        [[np.max(np.abs(np.linalg.eigvalsh(H[i] - H[j]))) for j in range(k)] for i in range(k)]
    )
    lower = float(dist.max()) / 2
    i, j = np.unravel_index(int(np.argmax(dist)), dist.shape)

    candidates = np.concatenate([((H[i] + H[j]) / 2)[None], H.mean(axis=0)[None], H])
    values = _general_value(H, candidates)
    c = int(np.argmin(values))
    best_C, best_val, origin = candidates[c], float(values[c]), f"candidate-{c}"
    if best_val <= lower + 1e-15 or lower == 0.0:
        return best_C, origin

    if opts.restarts and opts.iterations:
        scale = max(lower, 1e-12)
        starts = []
        for r in range(opts.restarts):
            rng = _restart_rng(opts.seed, r)
            noise = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            starts.append(H.mean(axis=0) + scale * (noise + noise.conj().T) / 4)
        sg_C, sg_val = _general_subgradient(H, np.stack(starts), opts, scale)
        r = int(np.argmin(sg_val))
        if sg_val[r] < best_val:
            best_C, best_val, origin = sg_C[r], float(sg_val[r]), f"restart-{r}"

    try:
        polished = _general_polish(H, best_C, tol)
        value = float(_general_value(H, polished))
        if value < best_val:
            best_C, origin = polished, "polish"
    except (ValueError, np.linalg.LinAlgError) as e:
        logger.warning(f"Radius polish failed: {e}")
    return best_C, origin


def radius_center(H: np.ndarray, opts: SolverOptions) -> Tuple[float, np.ndarray]:
    """
    Radius search on a raw (k, n, n) stack, without Jacobi verification or
    certificates. Inner loops of the family search call this.

    Returns:
        Tuple (value at the center found, center matrix)
    """
    k, n, _ = H.shape
    if n == 2:
        t, v = bloch_stack(H)
        sol = solve_qubit_radius(t, v, opts)
        C = (sol.tau / 2) * np.eye(2, dtype=complex) + np.tensordot(sol.w, np.stack(PAULIS), axes=1)
        return sol.value, C
    if n == 1:
        values = H[:, 0, 0].real
        return float(values.max() - values.min()) / 2, np.array(
            [[(values.max() + values.min()) / 2]], dtype=complex
        )
    C, _ = _solve_general_radius(H, opts)
    return float(_general_value(H, C)), C


# === Dual certificates ===


def _hermitian_to_real(M: np.ndarray) -> np.ndarray:
    return np.concatenate([M.real.ravel(), M.imag.ravel()])


def certificate_multipliers(
    H: np.ndarray, C: np.ndarray, radius: float, tol: float = 1e-6
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Feasible dual multipliers built from the extremal eigenvectors at a center.

    For every H_i - C with an eigenvalue near +radius (resp. -radius), the
    eigenvector's projector is a candidate for lambda_i (resp. lambda'_i).
    Non-negative weights balancing sum(lambda) = sum(lambda') with both traces
    1/2 come from non-negative least squares; any residual imbalance is then
    absorbed exactly and the traces renormalized, so the result is always
    feasible.

    Returns:
        Tuple (lambdas, lambdas_prime) of shape (k, n, n), or None when no
        extremal eigenvectors are found
    """
    k, n, _ = H.shape
    if radius <= 0.0:
        lam = np.zeros((k, n, n), dtype=complex)
        lam[0] = np.eye(n) / (2 * n)
        return lam, lam.copy()

    w, V = np.linalg.eigh(H - C)
    act = max(tol, 1e-9) * max(1.0, radius)
    plus = [(i, V[i][:, a]) for i in range(k) for a in range(n) if w[i, a] >= radius - act]
    minus = [(i, V[i][:, a]) for i in range(k) for a in range(n) if w[i, a] <= -radius + act]
    if not plus or not minus:
        return None

    columns = []
    for _, vec in plus:
        columns.append(np.concatenate([_hermitian_to_real(np.outer(vec, vec.conj())), [1.0, 0.0]]))
    for _, vec in minus:
        columns.append(
            np.concatenate([-_hermitian_to_real(np.outer(vec, vec.conj())), [0.0, 1.0]])
        )
    system = np.array(columns).T
    target = np.zeros(system.shape[0])
    target[-2:] = 0.5
    weights, _ = nnls(system, target)

    lam = np.zeros((k, n, n), dtype=complex)
    lamp = np.zeros((k, n, n), dtype=complex)
    for weight, (i, vec) in zip(weights[: len(plus)], plus):
        lam[i] += weight * np.outer(vec, vec.conj())
    for weight, (i, vec) in zip(weights[len(plus):], minus):
        lamp[i] += weight * np.outer(vec, vec.conj())

    # Absorb the imbalance E = sum(lam) - sum(lamp) = E+ - E- into both sides
    imbalance = lam.sum(axis=0) - lamp.sum(axis=0)
    imbalance = (imbalance + imbalance.conj().T) / 2
    ev, evec = np.linalg.eigh(imbalance)
    pos = (evec * np.maximum(ev, 0.0)) @ evec.conj().T
    neg = (evec * np.maximum(-ev, 0.0)) @ evec.conj().T
    lam[plus[0][0]] += neg
    lamp[plus[0][0]] += pos

    total = float(np.trace(lam.sum(axis=0)).real)
    if total <= 1e-12:
        return None
    lam *= 0.5 / total
    lamp *= 0.5 / total
    return lam, lamp


def _dual_objective(H: np.ndarray, lam: np.ndarray, lamp: np.ndarray) -> float:
    return float(np.einsum("kij,kji->", lam - lamp, H).real)


def dual_value(
    ops: Sequence[HermitianOp],
    lambdas: Sequence[HermitianOp],
    lambdas_prime: Sequence[HermitianOp],
) -> float:
    """
    sum_i Tr((lambda_i - lambda'_i) H_i) for feasible multipliers.

    Feasibility: every multiplier PSD (min eigenvalue >= -1e-9),
    sum(lambda) = sum(lambda') within 1e-8, Tr(sum(lambda)) = 1/2 within 1e-8.
    Violations raise InfeasibleMultipliersError.
    """
    n = _validate_family(ops)
    if len(lambdas) != len(ops) or len(lambdas_prime) != len(ops):
        raise DimensionMismatchError(
            f"Need {len(ops)} multipliers per side, got {len(lambdas)} and {len(lambdas_prime)}"
        )
    for side, group in (("lambda", lambdas), ("lambda'", lambdas_prime)):
        for i, op in enumerate(group):
            if op.dim != n:
                raise DimensionMismatchError(f"{side}[{i}] has dim {op.dim}, expected {n}")
            lowest = min_eigenvalue(op)
            if lowest < -PSD_TOL:
                raise InfeasibleMultipliersError(
                    f"{side}[{i}] is not positive semidefinite", detail=f"min eig {lowest:.3e}"
                )

    total = sum((op.matrix for op in lambdas), np.zeros((n, n), dtype=complex))
    total_prime = sum((op.matrix for op in lambdas_prime), np.zeros((n, n), dtype=complex))
    imbalance = float(np.max(np.abs(total - total_prime)))
    if imbalance > EQUALITY_TOL:
        raise InfeasibleMultipliersError(
            "sum(lambda) != sum(lambda')", detail=f"max deviation {imbalance:.3e}"
        )
    trace = float(np.trace(total).real)
    if abs(trace - 0.5) > EQUALITY_TOL:
        raise InfeasibleMultipliersError(f"Tr(sum(lambda)) = {trace!r}, expected 1/2")

    H = np.stack([op.matrix for op in ops])
    lam = np.stack([op.matrix for op in lambdas])
    lamp = np.stack([op.matrix for op in lambdas_prime])
    return _dual_objective(H, lam, lamp)


# === Public radius ===


def rad_op(ops: Sequence[HermitianOp], opts: Optional[SolverOptions] = None) -> RadOpResult:
    """
    Operator-norm radius of a Hermitian family (1 <= dim <= 4, at most 16 operators).

    Args:
        ops: the family H_i
        opts: restarts, iterations, seed and tolerance for the search

    Returns:
        RadOpResult with the verified radius, its center, and the best
        certified lower bound (pairwise bound or constructed dual value)
    """
    opts = opts or SolverOptions.from_settings()
    n = _validate_family(ops)
    H = np.stack([op.matrix for op in ops])

    if n == 2:
        t, v = bloch_arrays(ops)
        sol = solve_qubit_radius(t, v, opts)
        center = from_bloch_arrays(sol.tau, sol.w)
        origin = sol.origin
    elif n == 1:
        values = H[:, 0, 0].real
        center = HermitianOp(np.array([[(values.max() + values.min()) / 2]]))
        origin = "midpoint"
    else:
        C, origin = _solve_general_radius(H, opts)
        center = HermitianOp(C)

    radius = max(operator_norm(op - center) for op in ops)
    lower, _ = pairwise_bound(ops)
    bound = lower
    lambdas = lambdas_prime = None

    multipliers = certificate_multipliers(H, center.matrix, radius, opts.tolerance_for(n))
    if multipliers is not None:
        lam, lamp = multipliers
        lambdas = [HermitianOp(m) for m in lam]
        lambdas_prime = [HermitianOp(m) for m in lamp]
        try:
            certified = dual_value(ops, lambdas, lambdas_prime)
            bound = max(bound, certified)
        except InfeasibleMultipliersError as e:
            logger.warning(f"Constructed multipliers rejected: {e}")
            lambdas = lambdas_prime = None

    logger.debug(
        f"rad_op: n={n} count={len(ops)} radius={radius:.12g} lower={bound:.12g} via {origin}"
    )
    return RadOpResult(
        radius=radius,
        center=center,
        dual_lower_bound=bound,
        lambdas=lambdas,
        lambdas_prime=lambdas_prime,
    )


def rad_convexity_check(
    J: Sequence[HermitianOp],
    K: Sequence[HermitianOp],
    alpha: float,
    opts: Optional[SolverOptions] = None,
) -> bool:
    """Rad{aJ + (1-a)K} <= a Rad{J} + (1-a) Rad{K} + 1e-6"""
    if len(J) != len(K):
        raise DimensionMismatchError(f"Families differ in size: {len(J)} vs {len(K)}")
    if any(j.dim != k.dim for j, k in zip(J, K)):
        raise DimensionMismatchError("Families differ in dimension")
    if not 0.0 <= alpha <= 1.0:
        raise InputValidationError(f"alpha must lie in [0, 1], got {alpha}")
    mixed = [alpha * j + (1 - alpha) * k for j, k in zip(J, K)]
    left = rad_op(mixed, opts).radius
    right = alpha * rad_op(J, opts).radius + (1 - alpha) * rad_op(K, opts).radius
    return left <= right + 1e-6
