"""
The flattened Schatten model: k x k matrices as a k^2-dimensional two-norm space with
the trace norm on E and the Frobenius inner product on L.

Flattening is column-stacking, so the superoperator of x -> a x b is kron(b^T, a).
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg

from .compat import compat_margin
from .core import (
    Operator,
    WeightedSpace,
    condition_numbers,
    is_proper_invertible,
    make_space,
    trace_norm_estimate,
)
from .errors import DimMismatch, SingularSystem
from .subspaces import (
    Subspace,
    complement_L,
    image,
    kernel,
    max_angle,
    range_of,
    span,
    subspace_equal,
)
from .utils.helpers import smallest_singular_value, spectral_norm, unvec, vec

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

TOL_SEPARATION = 1e-8
TOL_STRUCTURE = 1e-10
TOL_ANGLE = 1e-8

SUPEROPERATOR_KINDS = ("left", "right", "two_sided", "adz", "transposed")


@dataclass(frozen=True, eq=False)
class MatrixSpaceModel:
    k: int
    ws: WeightedSpace

    def vec(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (self.k, self.k):
            raise DimMismatch(f"Expected a {self.k}x{self.k} matrix, got {matrix.shape}")
        return vec(matrix)

    def unvec(self, vector: np.ndarray) -> np.ndarray:
        return unvec(vector, self.k)


def make_model(k: int) -> MatrixSpaceModel:
    return MatrixSpaceModel(k=k, ws=make_space(k * k, np.eye(k * k), ("trace", k)))


def _square(matrix, k: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (k, k):
        raise DimMismatch(f"Expected a {k}x{k} matrix, got {matrix.shape}")
    return matrix


def commutation_matrix(k: int) -> np.ndarray:
    """K with K vec(x) = vec(x^T)."""
    permutation = np.zeros((k * k, k * k))
    for i in range(k):
        for j in range(k):
            permutation[j + i * k, i + j * k] = 1.0
    return permutation


def superop(model: MatrixSpaceModel, kind: str, *matrices: np.ndarray) -> Operator:
    """
    Flattened superoperator on the model.

    kind:
        left(a):          x -> a x
        right(b):         x -> x b
        two_sided(a, b):  x -> a x b
        adz(z):           x -> z* x z
        transposed(u, v): x -> u x^T v
    """
    k = model.k
    eye = np.eye(k)
    mats = [_square(matrix, k) for matrix in matrices]
    expected = {"left": 1, "right": 1, "two_sided": 2, "adz": 1, "transposed": 2}

    if kind not in expected:
        raise ValueError(
            f"Unknown superoperator {kind!r}, expected one of {SUPEROPERATOR_KINDS}"
        )
    if len(mats) != expected[kind]:
        raise DimMismatch(f"{kind} takes {expected[kind]} matrices, got {len(mats)}")

    if kind == "left":
        flattened = np.kron(eye, mats[0])
    elif kind == "right":
        flattened = np.kron(mats[0].T, eye)
    elif kind == "two_sided":
        flattened = np.kron(mats[1].T, mats[0])
    elif kind == "adz":
        flattened = np.kron(mats[0].T, mats[0].conj().T)
    else:
        flattened = np.kron(mats[1].T, mats[0]) @ commutation_matrix(k)

    return Operator(flattened, model.ws)


def block_q(z: np.ndarray) -> np.ndarray:
    """
    The idempotent

        [[I, z],
         [0, 0]]
    """
    z = np.asarray(z, dtype=complex)
    k = z.shape[0]
    q = np.zeros((2 * k, 2 * k), dtype=complex)
    q[:k, :k] = np.eye(k)
    q[:k, k:] = z
    return q


@dataclass(frozen=True)
class ZCriterion:
    pair_margin: float
    op_margin: float


def z_criterion_margin(z: np.ndarray) -> ZCriterion:
    """
    pair_margin = min |1 + conj(l) m| over eigenvalue pairs of z, and op_margin the
    smallest singular value of I + Ad_z. Both vanish for self-adjoint symmetries.
    """
    z = np.asarray(z, dtype=complex)
    k = z.shape[0]
    eigenvalues = scipy.linalg.eigvals(z)
    products = np.conj(eigenvalues)[:, None] * eigenvalues[None, :]
    pair_margin = float(np.min(np.abs(1 + products)))

    ad_z = np.kron(z.T, z.conj().T)
    op_margin = smallest_singular_value(np.eye(k * k) + ad_z)

    return ZCriterion(pair_margin=pair_margin, op_margin=op_margin)


@dataclass(frozen=True, eq=False)
class SylvesterResult:
    solvable: bool
    x: Optional[np.ndarray]
    margin: float
    residual: float


def sylvester(
    c: np.ndarray,
    d: np.ndarray,
    w: np.ndarray,
    require_solution: bool = False,
) -> SylvesterResult:
    """
    Solve c x - x d = w through the flattened system (I kron c - d^T kron I) vec x = vec w.

    The map is invertible exactly when the spectra of c and d are disjoint. Raises
    SingularSystem when they meet and :param require_solution is set.
    """
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    w = np.asarray(w, dtype=complex)
    k = c.shape[0]
    if c.shape != (k, k) or d.shape != (k, k) or w.shape != (k, k):
        raise DimMismatch("Sylvester data must be square matrices of equal size")

    flattened = np.kron(np.eye(k), c) - np.kron(d.T, np.eye(k))
    margin = smallest_singular_value(flattened)

    separation = np.min(
        np.abs(scipy.linalg.eigvals(c)[:, None] - scipy.linalg.eigvals(d)[None, :])
    )
    tol = TOL_SEPARATION * max(1.0, spectral_norm(c) + spectral_norm(d))
    solvable = bool(separation > tol)

    if not solvable:
        if require_solution:
            raise SingularSystem(f"Spectra of c and d meet (separation {separation:.3e})")
        return SylvesterResult(solvable=False, x=None, margin=margin, residual=float("nan"))

    x = unvec(np.linalg.solve(flattened, vec(w)), k)
    residual = spectral_norm(c @ x - x @ d - w)
    log.debug("Sylvester solve: margin %.3e, residual %.3e", margin, residual)

    return SylvesterResult(solvable=True, x=x, margin=margin, residual=residual)


def _require_block_model(model: MatrixSpaceModel, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim != 2 or z.shape[0] != z.shape[1] or model.k != 2 * z.shape[0]:
        raise DimMismatch(f"A {model.k}x{model.k} model needs z of size {model.k // 2}")
    return z


def _cq_range(model: MatrixSpaceModel, z: np.ndarray) -> Subspace:
    q = block_q(z)
    return range_of(superop(model, "two_sided", q, q))


def _constraint_subspace(ws: WeightedSpace, constraint: np.ndarray) -> Subspace:
    return Subspace(scipy.linalg.null_space(constraint), ws)


@dataclass(frozen=True)
class ComplementReport:
    derived_angle: float
    printed_angle: float
    derived_matches: bool
    printed_matches: bool
    corrected_margin: float


def complement_conditions(model: MatrixSpaceModel, z: np.ndarray) -> ComplementReport:
    """
    Compare the Frobenius complement of S = {q x q}, q = block_q(z), with the block
    subspaces {y11 + y12 z* = 0} and {y11 + z* y12 = 0}.

    ``corrected_margin`` is the smallest singular value of a -> a (I + z z*), which
    couples the S-block of a matrix to its component along the first subspace.
    """
    z = _require_block_model(model, z)
    k = z.shape[0]

    first = np.hstack([np.eye(k), np.zeros((k, k))])
    second = np.hstack([np.zeros((k, k)), np.eye(k)])

    derived = np.kron(first, first) + np.kron(z.conj() @ second, first)
    printed = np.kron(first, first) + np.kron(second, z.conj().T @ first)

    complement = complement_L(_cq_range(model, z))
    derived_angle = max_angle(complement, _constraint_subspace(model.ws, derived))
    printed_angle = max_angle(complement, _constraint_subspace(model.ws, printed))

    reduction = np.kron((np.eye(k) + z @ z.conj().T).T, np.eye(k))

    return ComplementReport(
        derived_angle=derived_angle,
        printed_angle=printed_angle,
        derived_matches=bool(derived_angle <= TOL_ANGLE),
        printed_matches=bool(printed_angle <= TOL_ANGLE),
        corrected_margin=smallest_singular_value(reduction),
    )


@dataclass(frozen=True)
class CqReport:
    pair_margin: float
    op_margin: float
    margin_default: float
    margin_nullspace: float
    corrected_margin: float
    derived_matches: bool
    printed_matches: bool


def cq_compat_demo(model: MatrixSpaceModel, z: np.ndarray) -> CqReport:
    """
    S = {q x q} for q = block_q(z), measured two ways: the finite-dimensional
    compatibility margins of S (against its Frobenius complement and against N(C_q))
    and the eigenvalue criterion on z.
    """
    z = _require_block_model(model, z)
    q = block_q(z)
    c_q = superop(model, "two_sided", q, q)
    S = range_of(c_q)

    criterion = z_criterion_margin(z)
    conditions = complement_conditions(model, z)

    return CqReport(
        pair_margin=criterion.pair_margin,
        op_margin=criterion.op_margin,
        margin_default=compat_margin(S).margin_c,
        margin_nullspace=compat_margin(S, kernel(c_q)).margin_c,
        corrected_margin=conditions.corrected_margin,
        derived_matches=conditions.derived_matches,
        printed_matches=conditions.printed_matches,
    )


@dataclass(frozen=True)
class TwoCompanionsReport:
    null_fixed_angle: float
    g_proper_invertible: bool
    cond_g: float
    cond_g_plus: float
    transported_matches: bool
    original_pair_margin: float
    transported_pair_margin: float
    transported_op_margin: float
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _precondition_violations(z: np.ndarray, t: np.ndarray) -> List[str]:
    violations = []
    z_scale = max(1.0, spectral_norm(z))

    if smallest_singular_value(z) <= TOL_STRUCTURE * z_scale:
        violations.append("z is not invertible")
    if spectral_norm(z @ z.conj().T - z.conj().T @ z) > TOL_STRUCTURE * z_scale**2:
        violations.append("z is not normal")
    if z_criterion_margin(z).pair_margin <= TOL_STRUCTURE:
        violations.append("z fails the eigenvalue criterion")
    if spectral_norm(t - t.conj().T) > TOL_STRUCTURE:
        violations.append("t is not self-adjoint")
    if spectral_norm(t @ t - np.eye(t.shape[0])) > TOL_STRUCTURE:
        violations.append("t is not a symmetry")

    return violations


def two_companions_demo(
    model: MatrixSpaceModel,
    z: np.ndarray,
    t: np.ndarray,
) -> TwoCompanionsReport:
    """
    Right multiplication G by x = diag(z, t) fixes T = N(C_q) and carries S = R(C_q)
    onto the range of C_q' with q' = block_q(t).

    G is proper-invertible, so G(S) is a proper companion of T; its eigenvalue
    criterion is that of t and vanishes when t is a non-trivial symmetry.
    Precondition failures are listed in ``violations``.
    """
    z = _require_block_model(model, z)
    t = _require_block_model(model, t)
    k = z.shape[0]

    violations = _precondition_violations(z, t)

    q = block_q(z)
    c_q = superop(model, "two_sided", q, q)
    S, T = range_of(c_q), kernel(c_q)

    x = scipy.linalg.block_diag(z, t)
    g = superop(model, "right", x)

    null_fixed_angle = max_angle(image(T, g), T)
    if null_fixed_angle > TOL_ANGLE:
        violations.append("G does not fix N(C_q)")

    g_proper_invertible = is_proper_invertible(g)
    if not g_proper_invertible:
        violations.append("G is not invertible in the proper algebra")

    transported = image(S, g)
    transported_matches = subspace_equal(transported, _cq_range(model, t))
    if not transported_matches:
        violations.append("G(S) is not the range of C_q' for q' = block_q(t)")

    cond_g, cond_g_plus = condition_numbers(g)
    transported_criterion = z_criterion_margin(t)

    for violation in violations:
        log.warning("two companions (k=%d): %s", k, violation)

    return TwoCompanionsReport(
        null_fixed_angle=null_fixed_angle,
        g_proper_invertible=g_proper_invertible,
        cond_g=cond_g,
        cond_g_plus=cond_g_plus,
        transported_matches=transported_matches,
        original_pair_margin=z_criterion_margin(z).pair_margin,
        transported_pair_margin=transported_criterion.pair_margin,
        transported_op_margin=transported_criterion.op_margin,
        violations=violations,
    )


@dataclass(frozen=True)
class AdzNormReport:
    frob_norm: float
    trace_norm_estimate: float
    znorm_sq: float
    holds: bool


def adz_norm_check(model: MatrixSpaceModel, z: np.ndarray) -> AdzNormReport:
    """
    ||Ad_z|| = ||z||^2 in the Frobenius norm (exact) and in the trace norm (estimate,
    which may only fall short of ||z||^2).
    """
    z = _square(z, model.k)
    ad_z = superop(model, "adz", z)

    frob_norm = spectral_norm(ad_z.matrix)
    estimate = trace_norm_estimate(ad_z)
    znorm_sq = spectral_norm(z) ** 2

    holds = abs(frob_norm - znorm_sq) <= TOL_STRUCTURE * max(1.0, znorm_sq) and (
        estimate <= znorm_sq + TOL_STRUCTURE * max(1.0, znorm_sq)
    )
    return AdzNormReport(
        frob_norm=frob_norm,
        trace_norm_estimate=estimate,
        znorm_sq=znorm_sq,
        holds=bool(holds),
    )


@dataclass(frozen=True)
class LqReport:
    plus_residual: float
    margin_c: float
    direct_margin: float
    min_c_squared: float


def lq_compat_demo(model: MatrixSpaceModel, q: np.ndarray) -> LqReport:
    """
    Left multiplication L_q by an idempotent q: L_q+ = L_q*, and C = L_q + L_q* - I
    has C^2 >= I, so S = R(L_q) and N(L_q) are compatible with margin at least one.
    """
    q = _square(q, model.k)
    l_q = superop(model, "left", q)
    l_q_star = superop(model, "left", q.conj().T)

    c = l_q.matrix + l_q_star.matrix - np.eye(model.ws.dim)
    c_squared = scipy.linalg.eigvalsh(c @ c.conj().T)

    return LqReport(
        plus_residual=spectral_norm(l_q.plus.matrix - l_q_star.matrix),
        margin_c=compat_margin(range_of(l_q), kernel(l_q)).margin_c,
        direct_margin=smallest_singular_value(c),
        min_c_squared=float(c_squared[0]),
    )


@dataclass(frozen=True)
class OrbitReport:
    angle: float
    matches: bool


def orbit_subspace_check(
    model: MatrixSpaceModel,
    z: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
) -> OrbitReport:
    """mu_{u,v}(S) = {(u q u*) y (v* q v)} for S = {q x q} and unitary u, v."""
    z = _require_block_model(model, z)
    u = _square(u, model.k)
    v = _square(v, model.k)
    q = block_q(z)

    moved = image(_cq_range(model, z), superop(model, "two_sided", u, v))
    rotated = superop(model, "two_sided", u @ q @ u.conj().T, v.conj().T @ q @ v)
    expected = span(model.ws, rotated.matrix)

    angle = max_angle(moved, expected)
    return OrbitReport(angle=angle, matches=bool(angle <= TOL_ANGLE))
