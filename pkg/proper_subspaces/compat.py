"""
Compatibility calculus: C_{S,T} = P_{S//T} + P_{S//T}+ - I, compatible projections,
their margins, Krein's criterion, companion transport and the companion metric.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    Operator,
    condition_numbers,
    identity,
    is_L_isometric,
    opnorm,
    proper_norm,
)
from .errors import IdentityViolation, IllConditioned, NotIdempotent, RangeOverlap
from .subspaces import (
    Subspace,
    block_projection,
    require_complementary,
    complement_L,
    containment_gap,
    image,
    kernel,
    max_angle,
    oblique_projection,
    ProjPair,
    range_of,
    subspace_equal,
    TOL_ANGLE,
    TOL_GAP,
    TOL_RANK,
)
from .utils.helpers import numerical_rank, smallest_singular_value, spectral_norm

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

TOL_IDEMPOTENT = 1e-8
TOL_FORMULA = 1e-9
TOL_ILL_CONDITIONED = 1e-12


def c_operator(S: Subspace, T: Subspace, tol_gap: float = TOL_GAP) -> Operator:
    """C_{S,T} = P + P+ - I for P = P_{S//T}; always symmetrizable."""
    pair = oblique_projection(S, T, tol_gap)
    return pair.p + pair.p_plus - identity(S.space)


def orthogonal_projection_L(S: Subspace) -> Operator:
    """The L-orthogonal projection B (B* A B)^-1 B* A onto S."""
    ws = S.space
    if S.rank == 0:
        return Operator(np.zeros((ws.dim, ws.dim)), ws)

    basis = S.basis
    weighted = basis.conj().T @ ws.weight
    return Operator(basis @ np.linalg.solve(weighted @ basis, weighted), ws)


def compat_projection(
    S: Subspace,
    T: Optional[Subspace] = None,
    tol_gap: float = TOL_GAP,
) -> ProjPair:
    """
    The compatible projection Q_S, computed as C^-1 P+ and as the L-orthogonal
    projection onto S.

    The direct path is returned; ``cross_residual`` is the disagreement between the
    two paths. When C is numerically singular the formula path is skipped with an
    IllConditioned warning. Raises IdentityViolation when the paths disagree beyond
    1e-9 times the condition numbers of C and of the weight.
    """
    if T is None:
        T = complement_L(S)
    require_complementary(S, T, tol_gap)

    ws = S.space
    pair = oblique_projection(S, T, tol_gap)
    c = pair.p + pair.p_plus - identity(ws)
    direct = orthogonal_projection_L(S)

    c_norm = spectral_norm(c.matrix)
    c_smallest = smallest_singular_value(c.matrix)

    cross_residual = 0.0
    if c_smallest < TOL_ILL_CONDITIONED * c_norm:
        warnings.warn(
            f"C_(S,T) is numerically singular (sigma_min {c_smallest:.3e}); "
            "using the direct construction only",
            IllConditioned,
        )
    else:
        formula = np.linalg.solve(c.matrix, pair.p_plus.matrix)
        cross_residual = spectral_norm(formula - direct.matrix)

        c_condition = c_norm / c_smallest
        allowed = TOL_FORMULA * c_condition * ws.condition
        allowed *= max(1.0, spectral_norm(direct.matrix))
        log.debug("Q_S cross residual %.3e (allowed %.3e)", cross_residual, allowed)
        if cross_residual > allowed:
            raise IdentityViolation(
                f"C^-1 P+ differs from the L-orthogonal projection by {cross_residual:.3e}"
            )

    return ProjPair(
        p=direct,
        p_plus=direct.plus,
        range_sub=S,
        null_sub=complement_L(S),
        cross_residual=cross_residual,
    )


@dataclass(frozen=True)
class CompatReport:
    margin_c: float
    q_norm: float
    residual_cross: float
    is_compatible: bool


def compat_margin(
    S: Subspace,
    T: Optional[Subspace] = None,
    tol_gap: float = TOL_GAP,
) -> CompatReport:
    """
    margin_c is the smallest singular value of C_{S,T} in E-coordinates. Trace-normed
    spaces use the Frobenius coordinates of the flattened model.
    """
    if T is None:
        T = complement_L(S)

    c = c_operator(S, T, tol_gap)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditioned)
        projection = compat_projection(S, T, tol_gap)

    margin_c = smallest_singular_value(c.matrix)
    return CompatReport(
        margin_c=margin_c,
        q_norm=opnorm(projection.p, "E"),
        residual_cross=projection.cross_residual,
        is_compatible=bool(margin_c > 0.0),
    )


def _require_idempotent(Q: Operator, tol: float = TOL_IDEMPOTENT) -> None:
    residual = spectral_norm(Q.matrix @ Q.matrix - Q.matrix)
    scale = max(1.0, spectral_norm(Q.matrix) ** 2)
    if residual > tol * scale:
        raise NotIdempotent(f"||Q^2 - Q|| = {residual:.3e}")


def krein_check(
    S: Subspace,
    Q: Operator,
    tol: float = TOL_ANGLE,
    tol_rank: float = TOL_RANK,
) -> bool:
    """True iff R(Q) = S and N(Q) lies inside the L-complement of S."""
    _require_idempotent(Q)

    if not subspace_equal(range_of(Q, tol_rank), S, tol):
        return False

    return containment_gap(kernel(Q, tol_rank), complement_L(S)) <= tol


@dataclass(frozen=True)
class BuckholtzReport:
    res1: float
    res2: float
    kappa: float


def buckholtz_verify(S: Subspace, T: Subspace, tol_gap: float = TOL_GAP) -> BuckholtzReport:
    """
    Residuals of (P_S - P_T)^-1 = P + P+ - I and P = P_S (P_S - P_T)^-1, where P_S, P_T
    are L-orthogonal projections and P = P_{S//T}. ``kappa`` is cond([B_S | B_T]).
    """
    pair = oblique_projection(S, T, tol_gap)
    ws = S.space
    eye = np.eye(ws.dim)

    difference = orthogonal_projection_L(S).matrix - orthogonal_projection_L(T).matrix
    c = pair.p.matrix + pair.p_plus.matrix - eye

    res1 = spectral_norm(difference @ c - eye)
    res2 = spectral_norm(
        orthogonal_projection_L(S).matrix @ np.linalg.inv(difference) - pair.p.matrix
    )

    blocks = np.hstack([S.basis, T.basis])
    kappa = spectral_norm(blocks) / smallest_singular_value(blocks)

    return BuckholtzReport(res1=res1, res2=res2, kappa=kappa)


def symm_identity_verify(S: Subspace, T: Subspace, tol_gap: float = TOL_GAP) -> float:
    """Residual of P_S - P_T = (2 P_{S//T} - I)(P_S + P_T)."""
    pair = oblique_projection(S, T, tol_gap)
    p_s = orthogonal_projection_L(S).matrix
    p_t = orthogonal_projection_L(T).matrix
    reflection = 2 * pair.p.matrix - np.eye(S.dim)

    return spectral_norm((p_s - p_t) - reflection @ (p_s + p_t))


def companion_transport(
    S: Subspace,
    T: Subspace,
    T1: Subspace,
    tol_gap: float = TOL_GAP,
) -> Operator:
    """G = P_{S//T} + P_{T1//S} P_{T//S}; fixes S and carries T onto T1."""
    require_complementary(S, T, tol_gap)
    require_complementary(S, T1, tol_gap)
    ws = S.space

    along_t = Operator(block_projection(S.basis, T.basis), ws)
    onto_t = Operator(block_projection(T.basis, S.basis), ws)
    onto_t1 = Operator(block_projection(T1.basis, S.basis), ws)

    return along_t + onto_t1 @ onto_t


@dataclass(frozen=True, eq=False)
class TransportReport:
    g: Operator
    angle_s: float
    angle_t: float
    cond_g: float
    cond_g_plus: float
    plus_residual: float
    ok: bool


def transport_report(
    S: Subspace,
    T: Subspace,
    T1: Subspace,
    tol: float = TOL_ANGLE,
) -> TransportReport:
    """
    Check the transport G of :func:`companion_transport`: G(S) = S, G(T) = T1, G and
    G+ invertible, and G+ = P_{T'//S'} + P_{S'//T'} P_{S'//T1'} where ' is the
    L-complement intersected with E.
    """
    g = companion_transport(S, T, T1)

    s_perp, t_perp, t1_perp = complement_L(S), complement_L(T), complement_L(T1)
    formula = block_projection(t_perp.basis, s_perp.basis) + block_projection(
        s_perp.basis, t_perp.basis
    ) @ block_projection(s_perp.basis, t1_perp.basis)
    plus_residual = spectral_norm(g.plus.matrix - formula)

    angle_s = max_angle(image(S, g), S)
    angle_t = max_angle(image(T, g), T1)
    cond_g, cond_g_plus = condition_numbers(g)

    ok = (
        angle_s <= tol
        and angle_t <= tol
        and np.isfinite(cond_g)
        and np.isfinite(cond_g_plus)
        and plus_residual <= TOL_FORMULA * max(1.0, cond_g) * S.space.condition
    )
    return TransportReport(
        g=g,
        angle_s=angle_s,
        angle_t=angle_t,
        cond_g=cond_g,
        cond_g_plus=cond_g_plus,
        plus_residual=plus_residual,
        ok=bool(ok),
    )


def companion_metric(
    S: Subspace,
    T1: Subspace,
    T2: Subspace,
    tol_gap: float = TOL_GAP,
) -> float:
    """d(T1, T2) = ||P_{T1//S} - P_{T2//S}||_P"""
    require_complementary(S, T1, tol_gap)
    require_complementary(S, T2, tol_gap)
    ws = S.space

    difference = block_projection(T1.basis, S.basis) - block_projection(T2.basis, S.basis)
    return proper_norm(Operator(difference, ws))


def companion_radius(S: Subspace, T: Subspace, tol_gap: float = TOL_GAP) -> float:
    """
    r = 1 / ||C_{S,T}^-1||_E. Every companion T1 with ||C_{S,T1} - C_{S,T}||_E < r
    keeps C_{S,T1} invertible.
    """
    c = c_operator(S, T, tol_gap)
    inverse = Operator(np.linalg.inv(c.matrix), S.space)
    return 1.0 / opnorm(inverse, "E")


@dataclass(frozen=True)
class StabilityReport:
    radius: float
    c_distance: float
    metric: float
    within_radius: bool
    t1_margin: float


def companion_stability(
    S: Subspace,
    T: Subspace,
    T1: Subspace,
    tol_gap: float = TOL_GAP,
) -> StabilityReport:
    radius = companion_radius(S, T, tol_gap)
    c_distance = opnorm(c_operator(S, T1, tol_gap) - c_operator(S, T, tol_gap), "E")

    return StabilityReport(
        radius=radius,
        c_distance=c_distance,
        metric=companion_metric(S, T, T1, tol_gap),
        within_radius=bool(c_distance < radius),
        t1_margin=smallest_singular_value(c_operator(S, T1, tol_gap).matrix),
    )


@dataclass(frozen=True)
class LemmaReport:
    nullspace_sum_is_space: bool
    range_sum_is_range: bool
    range_contained: bool
    equivalence_holds: bool
    remark_holds: bool


def algebraic_lemma_check(
    T1: Operator,
    T2: Operator,
    tol_rank: float = TOL_RANK,
) -> LemmaReport:
    """
    For R(T1) and R(T2) meeting only at zero: E = N(T1) + N(T2) iff
    R(T1) + R(T2) = R(T1 + T2) iff R(T1) is inside R(T1 + T2).
    """
    a, b = T1.matrix, T2.matrix
    n = a.shape[0]

    rank_a = numerical_rank(a, tol_rank)
    rank_b = numerical_rank(b, tol_rank)
    rank_joint = numerical_rank(np.hstack([a, b]), tol_rank)

    overlap = rank_a + rank_b - rank_joint
    if overlap > 0:
        raise RangeOverlap(f"R(T1) and R(T2) share a {overlap}-dimensional subspace", overlap)

    kernels = np.hstack([kernel(T1, tol_rank).basis, kernel(T2, tol_rank).basis])
    nullspace_sum_is_space = numerical_rank(kernels, tol_rank) == n

    rank_sum = numerical_rank(a + b, tol_rank)
    range_sum_is_range = rank_sum == rank_joint
    range_contained = numerical_rank(np.hstack([a + b, a]), tol_rank) == rank_sum

    log.debug(
        "Lemma sides: kernels %s, ranges %s, containment %s",
        nullspace_sum_is_space,
        range_sum_is_range,
        range_contained,
    )
    return LemmaReport(
        nullspace_sum_is_space=nullspace_sum_is_space,
        range_sum_is_range=range_sum_is_range,
        range_contained=range_contained,
        equivalence_holds=nullspace_sum_is_space == range_sum_is_range,
        remark_holds=nullspace_sum_is_space == range_contained,
    )


def isometry_transport_residual(S: Subspace, G: Operator) -> float:
    """||Q_{G(S)} - G Q_S G^-1|| for an L-isometric G."""
    if not is_L_isometric(G):
        raise IdentityViolation("Compatible subspaces are only transported by L-isometries")

    q = orthogonal_projection_L(S).matrix
    q_image = orthogonal_projection_L(image(S, G)).matrix
    conjugated = G.matrix @ q @ np.linalg.inv(G.matrix)

    return spectral_norm(q_image - conjugated)
