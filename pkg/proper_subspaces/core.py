"""
The finite-dimensional two-norm space model and the proper-adjoint calculus on it.

E is C^n with either the Euclidean norm or (for n = k^2) the trace norm of the
column-stacked k x k matrix; L is C^n with the inner product <f, g>_L = g* A f for a
positive-definite weight A. Every operator is proper in this model and its
plus-adjoint is T+ = A^-1 T* A.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from .errors import (
    DimMismatch,
    IdentityViolation,
    NonIdentityWeightForTrace,
    NormCapViolated,
    NotPositiveDefinite,
)
from .utils.helpers import smallest_singular_value, spectral_norm, unvec, vec

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

TOL_HERM_REL = 1e-12
TOL_PD = 1e-12
TOL_NORM_CAP = 1e-12
TOL_IDENTITY = 1e-10
TOL_ISOMETRY = 1e-8

ESTIMATOR_RESTARTS = 50
ESTIMATOR_ITERATIONS = 200
ESTIMATOR_SEED = 0


class ENorm(NamedTuple):
    kind: str
    k: Optional[int] = None

    @staticmethod
    def parse(tag: Union["ENorm", str, Tuple[str, int]]) -> "ENorm":
        """Accepts ``"euclid"``, ``"trace(k)"``, ``("trace", k)`` or an ENorm."""
        if isinstance(tag, ENorm):
            return tag

        if isinstance(tag, tuple):
            return ENorm(*tag)

        text = tag.strip().lower()
        if text == "euclid":
            return EUCLID

        if text.startswith("trace(") and text.endswith(")"):
            try:
                return ENorm("trace", int(text[len("trace(") : -1]))
            except ValueError:
                pass

        raise ValueError(f"Unknown E-norm tag {tag!r}")

    @property
    def is_trace(self) -> bool:
        return self.kind == "trace"

    def __str__(self) -> str:
        return f"trace({self.k})" if self.is_trace else self.kind


EUCLID = ENorm("euclid")


@dataclass(frozen=True, eq=False)
class WeightedSpace:
    dim: int
    weight: np.ndarray
    enorm: ENorm = EUCLID

    @cached_property
    def _spectral(self) -> Tuple[np.ndarray, np.ndarray]:
        return scipy.linalg.eigh(self.weight)

    @property
    def weight_eigenvalues(self) -> np.ndarray:
        return self._spectral[0]

    @property
    def condition(self) -> float:
        eigenvalues = self.weight_eigenvalues
        return float(eigenvalues[-1] / eigenvalues[0])

    def _weight_power(self, power: float) -> np.ndarray:
        eigenvalues, basis = self._spectral
        return (basis * eigenvalues**power) @ basis.conj().T

    @cached_property
    def sqrt_weight(self) -> np.ndarray:
        return self._weight_power(0.5)

    @cached_property
    def inv_sqrt_weight(self) -> np.ndarray:
        return self._weight_power(-0.5)

    @cached_property
    def inv_weight(self) -> np.ndarray:
        return self._weight_power(-1.0)

    def check_vector(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=complex)
        if f.shape != (self.dim,):
            raise DimMismatch(f"Expected a vector of length {self.dim}, got {f.shape}")
        return f

    def __repr__(self) -> str:
        return f"WeightedSpace(dim={self.dim}, enorm={self.enorm})"


def make_space(
    n: int,
    weight: np.ndarray,
    enorm: Union[ENorm, str] = "euclid",
) -> WeightedSpace:
    """
    Validate and build a two-norm space.

    The weight is symmetrized as (A + A*)/2 before the positivity and norm-cap
    checks. Raises NotPositiveDefinite, NormCapViolated, DimMismatch or
    NonIdentityWeightForTrace.
    """
    enorm = ENorm.parse(enorm)
    weight = np.asarray(weight, dtype=complex)

    if n < 1 or weight.shape != (n, n):
        raise DimMismatch(f"Weight must be {n}x{n}, got {weight.shape}")

    if enorm.is_trace and (enorm.k is None or enorm.k**2 != n):
        raise DimMismatch(f"{enorm} requires dimension k^2, got {n}")

    asymmetry = spectral_norm(weight - weight.conj().T)
    if asymmetry > TOL_HERM_REL * max(spectral_norm(weight), 1.0):
        log.warning("Weight is not Hermitian (residual %.3e); symmetrizing", asymmetry)
    weight = (weight + weight.conj().T) / 2

    eigenvalues = scipy.linalg.eigvalsh(weight)
    if eigenvalues[0] <= TOL_PD:
        raise NotPositiveDefinite(
            f"Weight has eigenvalue {eigenvalues[0]:.3e} <= {TOL_PD:.0e}"
        )

    if enorm.is_trace:
        if spectral_norm(weight - np.eye(n)) > TOL_NORM_CAP:
            raise NonIdentityWeightForTrace("A trace-normed space needs weight = I")
    elif eigenvalues[-1] > 1 + TOL_NORM_CAP:
        raise NormCapViolated(
            f"Spectral norm of the weight is {eigenvalues[-1]:.6g} > 1"
        )

    return WeightedSpace(dim=n, weight=weight, enorm=enorm)


def euclidean_space(n: int) -> WeightedSpace:
    return make_space(n, np.eye(n), "euclid")


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    space: WeightedSpace

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (self.space.dim, self.space.dim):
            raise DimMismatch(
                f"Operator on {self.space.dim}-dim space cannot have shape {matrix.shape}"
            )
        object.__setattr__(self, "matrix", matrix)

    @cached_property
    def plus(self) -> "Operator":
        """T+ = A^-1 T* A, computed in the eigenbasis of the weight."""
        eigenvalues, basis = self.space._spectral
        rotated = basis.conj().T @ self.matrix @ basis
        scaled = rotated.conj().T * (eigenvalues[None, :] / eigenvalues[:, None])
        return Operator(basis @ scaled @ basis.conj().T, self.space)

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(f, dtype=complex)

    def _check_same_space(self, other: "Operator") -> None:
        if other.space is self.space:
            return
        if (
            other.space.dim != self.space.dim
            or other.space.enorm != self.space.enorm
            or not np.array_equal(other.space.weight, self.space.weight)
        ):
            raise DimMismatch("Operators act on different spaces")

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.matrix @ other.matrix, self.space)

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.matrix + other.matrix, self.space)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.matrix - other.matrix, self.space)

    def __neg__(self) -> "Operator":
        return Operator(-self.matrix, self.space)

    def __rmul__(self, scalar: complex) -> "Operator":
        return Operator(scalar * self.matrix, self.space)

    def __repr__(self) -> str:
        return f"Operator(dim={self.space.dim})"


def identity(ws: WeightedSpace) -> Operator:
    return Operator(np.eye(ws.dim), ws)


def inner_L(ws: WeightedSpace, f: np.ndarray, g: np.ndarray) -> complex:
    """<f, g>_L = g* A f, linear in f and conjugate-linear in g."""
    f = ws.check_vector(f)
    g = ws.check_vector(g)
    return complex(np.vdot(g, ws.weight @ f))


def vector_norm(ws: WeightedSpace, f: np.ndarray, which: str = "E") -> float:
    f = ws.check_vector(f)

    if which == "L":
        return float(np.sqrt(max(inner_L(ws, f, f).real, 0.0)))

    if ws.enorm.is_trace:
        return float(scipy.linalg.svdvals(unvec(f, ws.enorm.k)).sum())

    return float(np.linalg.norm(f))


def plus_adjoint(T: Operator) -> Operator:
    return T.plus


def adjoint_identity_residual(T: Operator) -> float:
    """max over standard basis pairs of |<T e_i, e_j>_L - <e_i, T+ e_j>_L|."""
    weight = T.space.weight
    left = weight @ T.matrix
    right = T.plus.matrix.conj().T @ weight
    return float(np.max(np.abs(left - right))) if left.size else 0.0


def norm_is_estimate(ws: WeightedSpace, which: str = "E") -> bool:
    return which == "E" and ws.enorm.is_trace


def opnorm(T: Operator, which: str = "E") -> float:
    """
    Operator norm of T on E or of its extension on L.

    On trace-normed spaces the E-norm is a lower-bound estimate, see
    :func:`trace_norm_estimate`.
    """
    if which == "L":
        ws = T.space
        return spectral_norm(ws.sqrt_weight @ T.matrix @ ws.inv_sqrt_weight)

    if which != "E":
        raise ValueError(f"Unknown norm {which!r}, expected 'E' or 'L'")

    if T.space.enorm.is_trace:
        return trace_norm_estimate(T)

    return spectral_norm(T.matrix)


def trace_norm_estimate(
    T: Operator,
    restarts: int = ESTIMATOR_RESTARTS,
    iterations: int = ESTIMATOR_ITERATIONS,
    seed: int = ESTIMATOR_SEED,
) -> float:
    """
    Lower bound for the trace-norm to trace-norm operator norm.

    The trace-norm unit ball is the convex hull of rank-one matrices u v*, so the
    supremum is attained there. Each restart alternates between the polar factor
    of T(u v*) and the top singular pair of the adjoint applied to it, which never
    decreases ||T(u v*)||_1.
    """
    k = T.space.enorm.k
    forward = T.matrix
    backward = forward.conj().T
    rng = np.random.default_rng(seed)

    best = 0.0
    for restart in range(restarts):
        if restart == 0:
            u = np.zeros(k, dtype=complex)
            u[0] = 1.0
            v = u.copy()
        else:
            u = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            v = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            u /= np.linalg.norm(u)
            v /= np.linalg.norm(v)

        value = 0.0
        for _ in range(iterations):
            image = unvec(forward @ vec(np.outer(u, v.conj())), k)
            left, singular_values, right = np.linalg.svd(image)
            current = float(singular_values.sum())
            if current <= value * (1 + 1e-13):
                value = max(value, current)
                break
            value = current

            gradient = unvec(backward @ vec(left @ right), k)
            g_left, _, g_right = np.linalg.svd(gradient)
            u = g_left[:, 0]
            v = g_right[0].conj()

        best = max(best, value)

    log.debug("Trace-norm estimate %.12g after %d restarts", best, restarts)
    return best


def proper_norm(T: Operator) -> float:
    """||T||_P = ||T||_E + ||T+||_E"""
    return opnorm(T, "E") + opnorm(T.plus, "E")


@dataclass(frozen=True)
class GZReport:
    lhs: float
    lhs_squared: float
    rhs: float
    holds: bool
    holds_unsquared: bool
    is_estimate: bool


def gz_bound_check(T: Operator, tol: float = TOL_IDENTITY) -> GZReport:
    """
    Compare ||T||_L with min(||T+T||_E, ||TT+||_E).

    ``holds`` tests ||T||_L^2 <= rhs, which is true for every proper operator;
    ``holds_unsquared`` tests ||T||_L <= rhs as literally written, which fails for
    contractions. On trace-normed spaces rhs is an estimate and both are advisory.
    """
    lhs = opnorm(T, "L")
    rhs = min(opnorm(T.plus @ T, "E"), opnorm(T @ T.plus, "E"))
    slack = tol * max(1.0, rhs)

    return GZReport(
        lhs=lhs,
        lhs_squared=lhs**2,
        rhs=rhs,
        holds=bool(lhs**2 <= rhs + slack),
        holds_unsquared=bool(lhs <= rhs + slack),
        is_estimate=norm_is_estimate(T.space, "E"),
    )


def is_symmetrizable(T: Operator, tol: float = TOL_IDENTITY) -> bool:
    return opnorm(T.plus - T, "E") <= tol * (1 + opnorm(T, "E"))


def is_L_isometric(G: Operator, tol: float = TOL_ISOMETRY) -> bool:
    weight = G.space.weight
    return spectral_norm(G.matrix.conj().T @ weight @ G.matrix - weight) <= tol


def condition_numbers(T: Operator) -> Tuple[float, float]:
    """Euclidean condition numbers of T and T+ (inf when singular)."""

    def condition(matrix: np.ndarray) -> float:
        smallest = smallest_singular_value(matrix)
        return float("inf") if smallest == 0.0 else spectral_norm(matrix) / smallest

    return condition(T.matrix), condition(T.plus.matrix)


def is_proper_invertible(T: Operator, tol: float = TOL_PD) -> bool:
    """T belongs to P^x exactly when T and T+ are both invertible on E."""
    return all(np.isfinite(c) and c * tol < 1 for c in condition_numbers(T))


def unitarizable_exponential(X: Operator, tol: float = TOL_ISOMETRY) -> Operator:
    """e^{iX} for a symmetrizable X, an L-isometric invertible operator."""
    if not is_symmetrizable(X, tol):
        raise IdentityViolation("e^{iX} is unitarizable only for symmetrizable X")
    return Operator(scipy.linalg.expm(1j * X.matrix), X.space)
