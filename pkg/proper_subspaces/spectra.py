import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from .core import Operator, opnorm
from .errors import ContourTooClose, NotIdempotent, NotIsolated
from .subspaces import ProjPair, Subspace
from .utils.helpers import match_multisets, matching_distance, spectral_norm

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

DEFAULT_NODES = 64
MIN_NODES = 16
TOL_MATCH = 1e-8
TOL_IDEMPOTENT = 1e-8
TOL_REAL = 1e-9
# nonzero singular values of a projection are at least one
RANGE_CUTOFF = 0.5

ALGEBRAS = ("E", "L", "P")


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    algebra: str
    values: np.ndarray
    gaps: np.ndarray
    mismatch: float = 0.0


def _matching_tolerance(T: Operator) -> float:
    return TOL_MATCH * (1.0 + spectral_norm(T.matrix))


def _isolation_gaps(values: np.ndarray, tol: float) -> np.ndarray:
    """Distance from each value to the nearest value that is not the same point."""
    gaps = np.full(values.size, np.inf)
    for i, value in enumerate(values):
        distances = np.abs(values - value)
        distances = distances[distances > tol]
        if distances.size:
            gaps[i] = distances.min()
    return gaps


def spectrum(T: Operator, algebra: str = "E") -> SpectrumReport:
    """
    Eigenvalue multiset of T in the algebra B(E), B(L) or P.

    The L spectrum is computed from A^1/2 T A^-1/2 and should match the E spectrum;
    ``mismatch`` holds their matching distance. The P spectrum is the multiset union
    of the E spectrum with the conjugated E spectrum of T+.
    """
    if algebra not in ALGEBRAS:
        raise ValueError(f"Unknown algebra {algebra!r}, expected one of {ALGEBRAS}")

    tol = _matching_tolerance(T)
    values_e = scipy.linalg.eigvals(T.matrix)
    mismatch = 0.0

    if algebra == "E":
        values = values_e

    elif algebra == "L":
        ws = T.space
        values = scipy.linalg.eigvals(ws.sqrt_weight @ T.matrix @ ws.inv_sqrt_weight)
        mismatch = matching_distance(values, values_e)
        if mismatch > tol * max(1.0, ws.condition):
            # eigenvalues of defective operators move by about eps**(1/size) under similarity
            log.warning("L and E spectra differ by %.3e", mismatch)

    else:
        conjugated = np.conj(scipy.linalg.eigvals(T.plus.matrix))
        _, _, extra = match_multisets(values_e, conjugated, tol)
        values = np.concatenate([values_e, conjugated[extra]])
        log.debug("sigma_P adds %d points to sigma_E", len(extra))

    values = np.sort_complex(np.asarray(values, dtype=complex))
    return SpectrumReport(
        algebra=algebra,
        values=values,
        gaps=_isolation_gaps(values, tol),
        mismatch=float(mismatch),
    )


def _contour_sum(matrix: np.ndarray, lam: complex, eps: float, m: int) -> np.ndarray:
    """(1/m) sum_j eps e^{i theta_j} (z_j - T)^-1 over z_j = lam + eps e^{i theta_j}."""
    n = matrix.shape[0]
    eye = np.eye(n, dtype=complex)
    total = np.zeros((n, n), dtype=complex)

    for j in range(m):
        offset = eps * np.exp(2j * np.pi * j / m)
        total += offset * np.linalg.solve((lam + offset) * eye - matrix, eye)

    return total / m


def _projection_subspaces(q: Operator) -> Tuple[Subspace, Subspace]:
    """Range and nullspace of a computed projection, split at RANGE_CUTOFF."""
    left, singular_values, right = np.linalg.svd(q.matrix)
    rank = int(np.count_nonzero(singular_values > RANGE_CUTOFF))
    return (
        Subspace(left[:, :rank], q.space),
        Subspace(right[rank:].conj().T, q.space),
    )


@dataclass(frozen=True, eq=False)
class RieszResult:
    proj: ProjPair
    idempotency_res: float
    plus_res: float
    range_dim: int


def check_contour(T: Operator, lam: complex, eps: float) -> None:
    """
    Raise ContourTooClose when a point of sigma_P lies within eps/2 of the circle
    |z - lam| = eps, and NotIsolated when one lies in the annulus eps <= |z - lam| < 2 eps.
    """
    distances = np.abs(spectrum(T, "P").values - lam)

    closest = np.min(np.abs(distances - eps))
    if closest < eps / 2:
        raise ContourTooClose(
            f"An eigenvalue lies {closest:.3e} from the contour of radius {eps:g}"
        )

    crowding = distances[(distances >= eps) & (distances < 2 * eps)]
    if crowding.size:
        raise NotIsolated(
            f"{crowding.size} spectral point(s) in the annulus {eps:g}..{2 * eps:g} around {lam}"
        )


def riesz_projection(
    T: Operator,
    lam: complex,
    eps: float,
    m: int = DEFAULT_NODES,
) -> RieszResult:
    """
    Riesz projection of T around lam by the m-point trapezoidal rule on |z - lam| = eps.

    The nodes are symmetric about the horizontal line through lam, so the same rule
    applied to T+ around conj(lam) reproduces the plus-adjoint of the result.
    """
    if eps <= 0:
        raise ValueError(f"Contour radius must be positive, got {eps}")
    if m < MIN_NODES or m % 2:
        raise ValueError(f"Node count must be an even integer >= {MIN_NODES}, got {m}")

    check_contour(T, lam, eps)

    q = Operator(_contour_sum(T.matrix, lam, eps, m), T.space)
    mirrored = _contour_sum(T.plus.matrix, np.conj(lam), eps, m)

    idempotency_res = spectral_norm(q.matrix @ q.matrix - q.matrix)
    plus_res = spectral_norm(q.plus.matrix - mirrored)
    log.debug(
        "Riesz projection at %s: idempotency %.3e, plus %.3e", lam, idempotency_res, plus_res
    )

    range_sub, null_sub = _projection_subspaces(q)
    proj = ProjPair(
        p=q,
        p_plus=q.plus,
        range_sub=range_sub,
        null_sub=null_sub,
        cross_residual=plus_res,
    )
    return RieszResult(
        proj=proj,
        idempotency_res=idempotency_res,
        plus_res=plus_res,
        range_dim=range_sub.rank,
    )


@dataclass(frozen=True, eq=False)
class VVPlusReport:
    spec_vvplus: np.ndarray
    min_symmetric: float
    positive: bool


def vvplus_diagnostics(Q: Operator, tol: float = TOL_REAL) -> VVPlusReport:
    """
    Spectrum of V V+ for the symmetry V = 2Q - I, and the smallest absolute
    eigenvalue of V + V+.

    V V+ is similar to a positive matrix in the model, so its spectrum is real and
    positive; ``positive`` records that observation.
    """
    residual = spectral_norm(Q.matrix @ Q.matrix - Q.matrix)
    if residual > TOL_IDEMPOTENT * max(1.0, opnorm(Q, "L") ** 2):
        raise NotIdempotent(f"||Q^2 - Q|| = {residual:.3e}")

    v = 2 * Q.matrix - np.eye(Q.space.dim)
    v_plus = 2 * Q.plus.matrix - np.eye(Q.space.dim)

    spec_vvplus = np.sort_complex(scipy.linalg.eigvals(v @ v_plus))
    symmetric = scipy.linalg.eigvals(v + v_plus)
    min_symmetric = float(np.min(np.abs(symmetric))) if symmetric.size else 0.0

    scale = max(1.0, float(np.max(np.abs(spec_vvplus)))) if spec_vvplus.size else 1.0
    positive = bool(
        np.all(np.abs(spec_vvplus.imag) <= tol * scale) and np.all(spec_vvplus.real > 0)
    )
    return VVPlusReport(
        spec_vvplus=spec_vvplus, min_symmetric=min_symmetric, positive=positive
    )
