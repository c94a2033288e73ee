import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.linalg

from .core import Operator, WeightedSpace, inner_L
from .errors import (
    BiorthogonalityViolated,
    DependentInput,
    DimMismatch,
    NotComplementary,
)
from .utils.helpers import numerical_rank, smallest_singular_value, spectral_norm

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

TOL_RANK = 1e-10
TOL_GAP = 1e-10
TOL_ANGLE = 1e-8
TOL_BIO = 1e-8


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of E stored by a Euclidean-orthonormal basis (n x r)."""

    basis: np.ndarray
    space: WeightedSpace
    tol_rank: float = TOL_RANK

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.space.dim

    def euclidean_projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def __repr__(self) -> str:
        return f"Subspace(rank={self.rank}, dim={self.dim})"


def _orthonormal_columns(matrix: np.ndarray, tol_rank: float) -> np.ndarray:
    n = matrix.shape[0]
    if matrix.shape[1] == 0:
        return np.zeros((n, 0), dtype=complex)

    left, singular_values, _ = np.linalg.svd(matrix, full_matrices=False)
    if singular_values[0] == 0.0:
        return np.zeros((n, 0), dtype=complex)

    rank = int(np.count_nonzero(singular_values > tol_rank * singular_values[0]))
    return left[:, :rank]


def _as_columns(ws: WeightedSpace, vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        matrix = np.asarray(vectors, dtype=complex)
    else:
        vectors = [np.asarray(v, dtype=complex) for v in vectors]
        if not vectors:
            return np.zeros((ws.dim, 0), dtype=complex)
        matrix = np.column_stack(vectors)

    if matrix.shape[0] != ws.dim:
        raise DimMismatch(f"Vectors must have length {ws.dim}, got {matrix.shape[0]}")
    return matrix


def span(ws: WeightedSpace, vectors, tol_rank: float = TOL_RANK) -> Subspace:
    """
    Orthonormal basis of the span of :param vectors (a list of n-vectors or an
    n x m matrix of columns), truncated at tol_rank times the largest singular value.
    An empty input gives the zero subspace.
    """
    matrix = _as_columns(ws, vectors)
    return Subspace(_orthonormal_columns(matrix, tol_rank), ws, tol_rank)


def whole_space(ws: WeightedSpace) -> Subspace:
    return Subspace(np.eye(ws.dim, dtype=complex), ws)


def zero_subspace(ws: WeightedSpace) -> Subspace:
    return Subspace(np.zeros((ws.dim, 0), dtype=complex), ws)


def complement_L(S: Subspace) -> Subspace:
    """S^perp intersected with E: { f : g* A f = 0 for all g in S } = A^-1 (S^perp_euclid)."""
    ws = S.space
    if S.rank == 0:
        return whole_space(ws)
    if S.rank == ws.dim:
        return zero_subspace(ws)

    euclidean = scipy.linalg.null_space(S.basis.conj().T)
    weighted = ws.inv_weight @ euclidean
    basis, _ = np.linalg.qr(weighted)
    return Subspace(basis, ws, S.tol_rank)


def image(S: Subspace, G: Operator) -> Subspace:
    return span(S.space, G.matrix @ S.basis, S.tol_rank)


def kernel(T: Operator, tol_rank: float = TOL_RANK) -> Subspace:
    matrix = T.matrix
    if spectral_norm(matrix) == 0.0:
        return whole_space(T.space)
    return Subspace(scipy.linalg.null_space(matrix, rcond=tol_rank), T.space, tol_rank)


def range_of(T: Operator, tol_rank: float = TOL_RANK) -> Subspace:
    return span(T.space, T.matrix, tol_rank)


def direct_sum_gap(S: Subspace, T: Subspace) -> float:
    """Smallest singular value of [B_S | B_T]; positive exactly when S + T = E directly."""
    if S.rank + T.rank != S.dim:
        return 0.0
    if S.dim == 0:
        return 1.0
    return smallest_singular_value(np.hstack([S.basis, T.basis]))


def max_angle(S1: Subspace, S2: Subspace) -> float:
    """Largest principal angle; pi/2 when the dimensions differ."""
    if S1.rank != S2.rank:
        return np.pi / 2
    if S1.rank == 0:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(S1.basis, S2.basis)))


def containment_gap(S1: Subspace, S2: Subspace) -> float:
    """||(I - P_S2) B_S1||, the sine of the largest angle from S1 into S2."""
    if S1.rank == 0:
        return 0.0
    residual = S1.basis - S2.basis @ (S2.basis.conj().T @ S1.basis)
    return spectral_norm(residual)


def subspace_equal(S1: Subspace, S2: Subspace, tol: float = TOL_ANGLE) -> bool:
    return S1.rank == S2.rank and max_angle(S1, S2) <= tol


@dataclass(frozen=True, eq=False)
class ProjPair:
    """
    An oblique projection with its plus-adjoint.

    ``cross_residual`` records the disagreement between ``p_plus`` and the
    independently constructed projection it must equal.
    """

    p: Operator
    p_plus: Operator
    range_sub: Subspace
    null_sub: Subspace
    cross_residual: float = 0.0


def block_projection(range_basis: np.ndarray, null_basis: np.ndarray) -> np.ndarray:
    """Projection onto span(range_basis) along span(null_basis) by a block solve."""
    n, r = range_basis.shape
    if r == 0:
        return np.zeros((n, n), dtype=complex)

    blocks = np.hstack([range_basis, null_basis])
    coordinates = np.linalg.solve(blocks, np.eye(n, dtype=complex))
    return range_basis @ coordinates[:r, :]


def require_complementary(S: Subspace, T: Subspace, tol_gap: float) -> float:
    if S.space.dim != T.space.dim:
        raise DimMismatch("Subspaces live in different spaces")

    gap = direct_sum_gap(S, T)
    if gap <= tol_gap:
        raise NotComplementary(
            f"Subspaces are not complementary: gap {gap:.3e} <= {tol_gap:.0e}",
            gap=gap,
        )
    return gap


def oblique_projection(
    S: Subspace,
    T: Subspace,
    tol_gap: float = TOL_GAP,
) -> ProjPair:
    """
    P_{S//T} with range S and nullspace T.

    ``p_plus`` is plus_adjoint(P); ``cross_residual`` compares it with the block
    construction of P_{T^perp // S^perp} (both complements in L, intersected with E).
    """
    require_complementary(S, T, tol_gap)
    ws = S.space

    p = Operator(block_projection(S.basis, T.basis), ws)
    t_perp, s_perp = complement_L(T), complement_L(S)
    independent = block_projection(t_perp.basis, s_perp.basis)

    cross_residual = spectral_norm(p.plus.matrix - independent)
    log.debug("P_{S//T} cross residual %.3e", cross_residual)

    return ProjPair(
        p=p,
        p_plus=p.plus,
        range_sub=S,
        null_sub=T,
        cross_residual=cross_residual,
    )


@dataclass(frozen=True)
class CompanionReport:
    gap1: float
    gap2: float
    ok: bool


def is_proper_companion(
    S: Subspace,
    T: Subspace,
    tol_gap: float = TOL_GAP,
) -> CompanionReport:
    gap1 = direct_sum_gap(S, T)
    gap2 = direct_sum_gap(complement_L(S), complement_L(T))
    return CompanionReport(gap1=gap1, gap2=gap2, ok=bool(gap1 > tol_gap and gap2 > tol_gap))


def gram_schmidt_L(
    ws: WeightedSpace,
    vectors: Sequence[np.ndarray],
    tol_rank: float = TOL_RANK,
) -> List[np.ndarray]:
    """Modified Gram-Schmidt in <., .>_L with one reorthogonalization pass."""
    matrix = _as_columns(ws, vectors)
    m = matrix.shape[1]
    if numerical_rank(matrix, tol_rank) < m:
        raise DependentInput(f"{m} input vectors are linearly dependent")

    orthonormal: List[np.ndarray] = []
    for column in range(m):
        f = matrix[:, column].copy()
        for _ in range(2):
            for q in orthonormal:
                f = f - inner_L(ws, f, q) * q
        f = f / np.sqrt(inner_L(ws, f, f).real)
        orthonormal.append(f)

    return orthonormal


def finite_rank_proper_projection(
    ws: WeightedSpace,
    f_list: Sequence[np.ndarray],
    h_list: Sequence[np.ndarray],
    tol_bio: float = TOL_BIO,
) -> ProjPair:
    """
    Q = sum_i <., h_i>_L f_i for a biorthogonal system <f_i, h_j>_L = delta_ij.

    Q+ = sum_i <., f_i>_L h_i; ``cross_residual`` compares it with plus_adjoint(Q).
    """
    F = _as_columns(ws, f_list)
    H = _as_columns(ws, h_list)
    if F.shape[1] != H.shape[1]:
        raise DimMismatch(f"{F.shape[1]} f-vectors but {H.shape[1]} h-vectors")

    gram = H.conj().T @ ws.weight @ F
    deviation = float(np.max(np.abs(gram - np.eye(F.shape[1])))) if gram.size else 0.0
    if deviation > tol_bio:
        raise BiorthogonalityViolated(
            f"<f_i, h_j>_L deviates from delta_ij by {deviation:.3e}"
        )

    q = Operator(F @ H.conj().T @ ws.weight, ws)
    q_plus_formula = H @ F.conj().T @ ws.weight

    return ProjPair(
        p=q,
        p_plus=q.plus,
        range_sub=span(ws, F),
        null_sub=complement_L(span(ws, H)),
        cross_residual=spectral_norm(q.plus.matrix - q_plus_formula),
    )


@dataclass(frozen=True)
class NullspaceReport:
    angle_kernel: float
    angle_range: float
    ok: bool


def nullspace_plus_check(
    T: Operator,
    tol_rank: float = TOL_RANK,
    tol: float = TOL_ANGLE,
) -> NullspaceReport:
    """N(T+) = R(T)^perp with E, and R(T+) = N(T)^perp with E."""
    angle_kernel = max_angle(kernel(T.plus, tol_rank), complement_L(range_of(T, tol_rank)))
    angle_range = max_angle(range_of(T.plus, tol_rank), complement_L(kernel(T, tol_rank)))

    return NullspaceReport(
        angle_kernel=angle_kernel,
        angle_range=angle_range,
        ok=bool(angle_kernel <= tol and angle_range <= tol),
    )
