"""
Assisted success probabilities for sending one bit over a channel.

- succ_ns: non-signaling assistance, 1/2 + Rad_1{rows} / 2.
- succ_qn: entanglement of local dimension n, 1/2 + max over projection
  families {B_y} of Rad{K_x}, where K_x = sum_y N(y|x) B_y.
- eval_strategy_success / strategy_from_certificate: the reduced success
  expression of a concrete quantum strategy and the strategy read off a dual
  certificate.
- check_bound_thm4 / check_bound_cor9: the ratio bounds against Succ(N).
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from bitassist.core.errors import (
    DimensionMismatchError,
    InfeasibleMultipliersError,
    InputValidationError,
)
from bitassist.models.channel import Channel
from bitassist.models.status import ElementKind
from bitassist.schemas.options import SolverOptions
from bitassist.services.channels import succ_unassisted
from bitassist.services.hermitian import (
    HermitianOp,
    Projector,
    bloch_angles,
    complement,
    eig_hermitian,
    projector_from_bloch,
)
from bitassist.services.radius import (
    RadOpResult,
    certificate_multipliers,
    rad1,
    rad_op,
    radius_center,
)

logger = logging.getLogger(__name__)

MIN_QN_DIM = 2
MAX_QN_DIM = 4
MAX_QN_OUTPUTS = 8
STATE_PSD_TOL = 1e-9
STATE_EQUALITY_TOL = 1e-8
POSITIVE_PART_TOL = 1e-12
COR9_RATIO = 0.5 + 1 / math.sqrt(2)


# === Measurement families ===


@dataclass(frozen=True, eq=False)
class FamilyElement:
    """One measurement element B_y: zero, identity, or a proper projector"""

    kind: ElementKind
    projector: Projector
    angles: Optional[Tuple[float, float]] = None

    @classmethod
    def from_projector(cls, p: Projector) -> "FamilyElement":
        rank = p.rank
        if rank == 0:
            return cls(ElementKind.ZERO, p)
        if rank == p.dim:
            return cls(ElementKind.IDENTITY, p)
        if p.dim == 2:
            return cls(ElementKind.RANK_ONE, p, bloch_angles(p))
        return cls(ElementKind.GENERAL, p)

    @classmethod
    def rank_one(cls, theta: float, phi: float) -> "FamilyElement":
        return cls(ElementKind.RANK_ONE, projector_from_bloch(theta, phi), (theta, phi))

    @property
    def op(self) -> HermitianOp:
        return self.projector.op

    def describe(self) -> dict:
        entry = {"kind": self.kind.value, "rank": self.projector.rank}
        if self.angles is not None:
            entry["theta"], entry["phi"] = self.angles
        if self.kind == ElementKind.GENERAL:
            w, V = np.linalg.eigh(self.projector.matrix)
            cols = V[:, w > 0.5]
            entry["columns"] = [[[float(z.real), float(z.imag)] for z in col] for col in cols.T]
        return entry


@dataclass(frozen=True, eq=False)
class ProjectionFamily:
    """Per output symbol y, a projector B_y on C^n"""

    elements: Tuple[FamilyElement, ...]

    def __post_init__(self):
        if not self.elements:
            raise InputValidationError("A projection family needs at least one element")
        dims = {e.projector.dim for e in self.elements}
        if len(dims) != 1:
            raise DimensionMismatchError(f"Family elements have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "elements", tuple(self.elements))

    @classmethod
    def from_matrices(cls, matrices: np.ndarray) -> "ProjectionFamily":
        return cls(tuple(FamilyElement.from_projector(Projector(HermitianOp(m))) for m in matrices))

    @property
    def dim(self) -> int:
        return self.elements[0].projector.dim

    def __len__(self) -> int:
        return len(self.elements)

    def operators(self) -> List[HermitianOp]:
        return [e.op for e in self.elements]

    def stack(self) -> np.ndarray:
        return np.stack([e.projector.matrix for e in self.elements])

    def describe(self) -> List[dict]:
        return [e.describe() for e in self.elements]


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """
    Measurement elements B_y (0 <= B_y <= I) and Bob's conditional states
    rho_a^x, as they enter the reduced success expression.
    """

    elements: Tuple[HermitianOp, ...]
    rho0: Tuple[HermitianOp, ...]
    rho1: Tuple[HermitianOp, ...]

    def validate(self, ch: Channel) -> None:
        if len(self.elements) != ch.num_outputs:
            raise DimensionMismatchError(
                f"Strategy has {len(self.elements)} elements, channel has {ch.num_outputs} outputs"
            )
        if len(self.rho0) != ch.num_inputs or len(self.rho1) != ch.num_inputs:
            raise DimensionMismatchError(
                f"Strategy needs {ch.num_inputs} states per bit value, "
                f"got {len(self.rho0)} and {len(self.rho1)}"
            )
        n = self.elements[0].dim
        for y, b in enumerate(self.elements):
            if b.dim != n:
                raise DimensionMismatchError(f"Element {y} has dim {b.dim}, expected {n}")
            w = eig_hermitian(b)
            if w[0] < -STATE_PSD_TOL or w[-1] > 1 + STATE_PSD_TOL:
                raise InputValidationError(f"Element {y} is not between 0 and I")
        for a, group in ((0, self.rho0), (1, self.rho1)):
            for x, rho in enumerate(group):
                if rho.dim != n:
                    raise DimensionMismatchError(f"rho_{a}^{x} has dim {rho.dim}, expected {n}")
                if eig_hermitian(rho)[0] < -STATE_PSD_TOL:
                    raise InfeasibleMultipliersError(f"rho_{a}^{x} is not positive semidefinite")

        total0 = sum((r.matrix for r in self.rho0), np.zeros((n, n), dtype=complex))
        total1 = sum((r.matrix for r in self.rho1), np.zeros((n, n), dtype=complex))
        if np.max(np.abs(total0 - total1)) > STATE_EQUALITY_TOL:
            raise InfeasibleMultipliersError("sum_x rho_0^x differs from sum_x rho_1^x")
        trace = float(np.trace(total0).real)
        if abs(trace - 1.0) > STATE_EQUALITY_TOL:
            raise InfeasibleMultipliersError(f"Tr(sum_x rho_0^x) = {trace!r}, expected 1")


@dataclass(frozen=True, eq=False)
class NsResult:
    value: float
    center: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class QnResult:
    value: float
    family: ProjectionFamily
    radius: RadOpResult
    heuristic: bool


@dataclass(frozen=True)
class BoundCheck:
    """A computed quantity against its bound; holds iff value <= bound + slack"""

    name: str
    value: float
    bound: float
    holds: bool
    extra: dict = field(default_factory=dict)


# === Non-signaling assistance ===


def succ_ns(ch: Channel) -> NsResult:
    """1/2 + Rad_1{rows}/2, with the LP center as certificate"""
    result = rad1(ch.rows)
    residual = float(np.abs(ch.rows - result.center).sum(axis=1).max())
    return NsResult(value=0.5 + result.radius / 2, center=result.center, residual=residual)


# === Entanglement assistance ===


def channel_family(ch: Channel, B: np.ndarray) -> np.ndarray:
    """K_x = sum_y N(y|x) B_y for a raw (|Y|, n, n) stack"""
    return np.einsum("xy,yij->xij", ch.rows, B)


def _positive_part_projectors(G: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(G)
    keep = (w > POSITIVE_PART_TOL).astype(float)
    return np.einsum("yia,ya,yja->yij", V, keep, V.conj())


def _random_family(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    noise = rng.normal(size=(count, n, n)) + 1j * rng.normal(size=(count, n, n))
    shift = rng.uniform(-1.5, 1.5, size=count)[:, None, None] * np.eye(n)
    return _positive_part_projectors((noise + noise.conj().transpose(0, 2, 1)) / 2 + shift)


def _scalar_search(ch: Channel, n: int) -> Tuple[float, np.ndarray]:
    """
    Every assignment of 0 or I to the outputs. For scalar families the
    radius is (max_x s_x - min_x s_x) / 2 with s = N @ assignment.
    """
    k = ch.num_outputs
    assignments = np.array(list(itertools.product((0.0, 1.0), repeat=k)))
    scores = ch.rows @ assignments.T
    radii = (scores.max(axis=0) - scores.min(axis=0)) / 2
    best = int(np.argmax(radii))
    B = assignments[best][:, None, None] * np.eye(n, dtype=complex)
    return float(radii[best]), B


def _seesaw(
    ch: Channel, B: np.ndarray, opts: SolverOptions, inner: SolverOptions
) -> Tuple[float, np.ndarray]:
    """
    Alternate center/multipliers with the family. For fixed multipliers the
    best projector family is B_y = positive part of sum_x N(y|x)(lambda_x - lambda'_x).
    """
    best_B = B
    K = channel_family(ch, B)
    best_val, C = radius_center(K, inner)
    rounds = 0
    while rounds < opts.seesaw_rounds:
        rounds += 1
        multipliers = certificate_multipliers(K, C, best_val, tol=1e-6)
        if multipliers is None:
            break
        lam, lamp = multipliers
        G = np.einsum("xy,xij->yij", ch.rows, lam - lamp)
        candidate = _positive_part_projectors(G)
        K_next = channel_family(ch, candidate)
        value, C_next = radius_center(K_next, inner)
        if value <= best_val + 1e-12:
            break
        best_val, best_B, K, C = value, candidate, K_next, C_next
    logger.debug(f"seesaw: {rounds} rounds, radius {best_val:.12g}")
    return best_val, best_B


def _coordinate_ascent(
    objective: Callable[[np.ndarray], float],
    params: np.ndarray,
    opts: SolverOptions,
    width: float = math.pi / 2,
) -> Tuple[float, np.ndarray]:
    """
    Maximize objective one coordinate at a time with a bounded golden-section
    (Brent) line search on [p - width, p + width].
    """
    params = np.array(params, dtype=float)
    best = objective(params)
    for _ in range(opts.angle_sweeps):
        start = best
        for i in range(params.size):
            def line(value, i=i):
                trial = params.copy()
                trial[i] = value
                return -objective(trial)

            found = minimize_scalar(
                line,
                bounds=(params[i] - width, params[i] + width),
                method="bounded",
                options={"xatol": opts.angle_tol},
            )
            if -found.fun > best:
                best = -found.fun
                params[i] = found.x
        if best <= start + opts.angle_tol:
            break
    return best, params


def _angle_polish(
    ch: Channel, B: np.ndarray, opts: SolverOptions, inner: SolverOptions
) -> Tuple[float, np.ndarray]:
    """Coordinate ascent on the Bloch angles of the rank-1 elements of a qubit family"""
    rank = np.rint(np.trace(B, axis1=1, axis2=2).real).astype(int)
    slots = np.flatnonzero(rank == 1)
    if not slots.size:
        return radius_center(channel_family(ch, B), inner)[0], B

    start = []
    for y in slots:
        theta, phi = bloch_angles(Projector(HermitianOp(B[y])))
        start.extend([theta, phi])

    def build(params: np.ndarray) -> np.ndarray:
        out = B.copy()
        for j, y in enumerate(slots):
            out[y] = projector_from_bloch(params[2 * j], params[2 * j + 1]).matrix
        return out

    def objective(params: np.ndarray) -> float:
        return radius_center(channel_family(ch, build(params)), inner)[0]

    value, params = _coordinate_ascent(objective, np.array(start), opts)
    return value, build(params)


def succ_qn(ch: Channel, n: int, opts: Optional[SolverOptions] = None) -> QnResult:
    """
    1/2 + the largest radius found over projection families {B_y} on C^n.

    The search runs, in order: every zero/identity assignment, seeded seesaw
    restarts, and (for n = 2) coordinate ascent on the rank-1 angles of the
    best family. The final family's radius is recomputed with rad_op at full
    options, so the reported value carries its center and dual bound.

    Args:
        ch: the channel N
        n: local dimension of the shared entanglement (2 to 4)
        opts: solver options; family_restarts and seesaw_rounds drive the search

    Returns:
        QnResult; heuristic is True for n > 2
    """
    if not MIN_QN_DIM <= n <= MAX_QN_DIM:
        raise InputValidationError(f"succ_qn needs {MIN_QN_DIM} <= n <= {MAX_QN_DIM}, got {n}")
    if ch.num_outputs > MAX_QN_OUTPUTS:
        raise InputValidationError(
            f"succ_qn supports at most {MAX_QN_OUTPUTS} outputs, channel has {ch.num_outputs}"
        )
    opts = opts or SolverOptions.from_settings()
    inner = opts.model_copy(update={"restarts": 0})

    best_val, best_B = _scalar_search(ch, n)
    origin = "scalar"
    for r in range(opts.family_restarts):
        rng = np.random.default_rng([opts.seed, 0x5EE5A, r])
        value, B = _seesaw(ch, _random_family(rng, ch.num_outputs, n), opts, inner)
        if value > best_val + 1e-12:
            best_val, best_B, origin = value, B, f"seesaw-{r}"

    if n == 2 and opts.angle_sweeps:
        value, B = _angle_polish(ch, best_B, opts, inner)
        if value > best_val + 1e-12:
            best_val, best_B, origin = value, B, "angles"

    family = ProjectionFamily.from_matrices(best_B)
    result = rad_op(channel_family_ops(ch, family), opts)
    heuristic = n > 2
    if heuristic:
        logger.warning(f"succ_qn with n={n} is a lower bound from a heuristic search")
    logger.info(f"succ_qn(n={n}): radius {result.radius:.10f} from {origin}")
    return QnResult(value=0.5 + result.radius, family=family, radius=result, heuristic=heuristic)


def channel_family_ops(ch: Channel, family: ProjectionFamily) -> List[HermitianOp]:
    if len(family) != ch.num_outputs:
        raise DimensionMismatchError(
            f"Family has {len(family)} elements, channel has {ch.num_outputs} outputs"
        )
    return [HermitianOp(K) for K in channel_family(ch, family.stack())]


def prevedel_family(
    X: Projector, Y: Projector, Z: Projector
) -> List[HermitianOp]:
    """{X+Y+Z, X+Y'+Z', X'+Y+Z', X'+Y'+Z} with ' the orthogonal complement"""
    Xc, Yc, Zc = complement(X), complement(Y), complement(Z)
    return [
        X.op + Y.op + Z.op,
        X.op + Yc.op + Zc.op,
        Xc.op + Y.op + Zc.op,
        Xc.op + Yc.op + Z.op,
    ]


def succ_q2_prevedel_reduced(opts: Optional[SolverOptions] = None) -> float:
    """
    Succ_Q2 of the Prevedel channel through the three-projector reduction:
    1/2 + (1/3) max Rad{X+Y+Z, X+Y'+Z', X'+Y+Z', X'+Y'+Z} over qubit projectors.

    Replacing any of X, Y, Z by its complement permutes the four operators, and
    a common unitary leaves the radius unchanged. So each projector is either
    scalar (0) or rank-1, and the first rank-1 projector is fixed to P_0.
    """
    opts = opts or SolverOptions.from_settings()
    inner = opts.model_copy(update={"restarts": 0})
    zero = Projector(HermitianOp.zero(2))
    fixed = projector_from_bloch(0.0, 0.0)
    starts = max(1, min(opts.family_restarts, 8))

    def radius_of(projectors: Sequence[Projector]) -> float:
        H = np.stack([op.matrix for op in prevedel_family(*projectors)])
        return radius_center(H, inner)[0]

    best = 0.0
    for pattern in itertools.product((False, True), repeat=3):
        ranked = [i for i, is_rank1 in enumerate(pattern) if is_rank1]
        free = ranked[1:]

        def assemble(params: np.ndarray) -> List[Projector]:
            chosen = [zero, zero, zero]
            if ranked:
                chosen[ranked[0]] = fixed
            for j, i in enumerate(free):
                chosen[i] = projector_from_bloch(params[2 * j], params[2 * j + 1])
            return chosen

        if not free:
            best = max(best, radius_of(assemble(np.zeros(0))))
            continue
        for r in range(starts):
            rng = np.random.default_rng([opts.seed, 0x9E7, r])
            x0 = np.column_stack(
                [rng.uniform(0, math.pi, len(free)), rng.uniform(0, 2 * math.pi, len(free))]
            ).ravel()
            value, _ = _coordinate_ascent(lambda p: radius_of(assemble(p)), x0, opts)
            best = max(best, value)

    logger.debug(f"Prevedel reduced search best radius {best:.12g}")
    return 0.5 + best / 3


# === Strategy evaluation ===


def eval_strategy_success(ch: Channel, strat: QuantumStrategy) -> float:
    """1/2 + (1/2) Tr[sum_x (rho_0^x - rho_1^x) sum_y N(y|x) B_y]"""
    strat.validate(ch)
    B = np.stack([b.matrix for b in strat.elements])
    K = channel_family(ch, B)
    diff = np.stack([r0.matrix - r1.matrix for r0, r1 in zip(strat.rho0, strat.rho1)])
    return 0.5 + 0.5 * float(np.einsum("xij,xji->", diff, K).real)


def strategy_from_certificate(
    ch: Channel, family: ProjectionFamily, result: RadOpResult
) -> QuantumStrategy:
    """rho_0^x = 2 lambda_x, rho_1^x = 2 lambda'_x; evaluates to 1/2 + the dual value"""
    if not result.has_certificate:
        raise InputValidationError("Radius result carries no dual multipliers")
    if len(result.lambdas) != ch.num_inputs:
        raise DimensionMismatchError(
            f"Certificate has {len(result.lambdas)} multipliers, channel has {ch.num_inputs} inputs"
        )
    return QuantumStrategy(
        elements=tuple(family.operators()),
        rho0=tuple(2 * lam for lam in result.lambdas),
        rho1=tuple(2 * lam for lam in result.lambdas_prime),
    )


# === Ratio bounds ===


def check_bound_thm4(ch: Channel) -> BoundCheck:
    """Succ_NS - 1/2 <= (2 - 2/|X|)(Succ - 1/2)"""
    lhs = succ_ns(ch).value - 0.5
    rhs = (2 - 2 / ch.num_inputs) * (succ_unassisted(ch) - 0.5)
    return BoundCheck(name="thm4", value=lhs, bound=rhs, holds=lhs <= rhs + 1e-9)


def check_bound_cor9(ch: Channel, succ_qb_lower: float) -> BoundCheck:
    """(Succ_Qb - 1/2)/(Succ - 1/2) <= 1/2 + 1/sqrt(2)"""
    base = succ_unassisted(ch) - 0.5
    if base <= 1e-12:
        raise InputValidationError(
            f"Ratio undefined for '{ch.name}': unassisted success is 1/2"
        )
    ratio = (succ_qb_lower - 0.5) / base
    return BoundCheck(name="cor9", value=ratio, bound=COR9_RATIO, holds=ratio <= COR9_RATIO + 1e-6)
