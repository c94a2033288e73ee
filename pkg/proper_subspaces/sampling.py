"""Seeded random instances: weights, operators, subspaces and biorthogonal systems."""
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.stats

from .core import Operator, WeightedSpace, make_space
from .subspaces import Subspace, span

WEIGHT_LOG_RANGE = (-4.0, 0.0)


def generator(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary."""
    if n == 1:
        return np.exp(2j * np.pi * rng.uniform(size=(1, 1)))
    return scipy.stats.unitary_group.rvs(n, random_state=rng)


def random_complex(shape: Tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_weight(n: int, rng: np.random.Generator) -> np.ndarray:
    """U D U* with D log-uniform in [1e-4, 1], rescaled to spectral norm 1."""
    eigenvalues = 10.0 ** rng.uniform(*WEIGHT_LOG_RANGE, size=n)
    eigenvalues /= eigenvalues.max()

    unitary = random_unitary(n, rng)
    weight = (unitary * eigenvalues) @ unitary.conj().T
    return (weight + weight.conj().T) / 2


def random_space(n: int, rng: np.random.Generator) -> WeightedSpace:
    return make_space(n, random_weight(n, rng))


def random_operator(ws: WeightedSpace, rng: np.random.Generator) -> Operator:
    return Operator(random_complex((ws.dim, ws.dim), rng) / np.sqrt(ws.dim), ws)


def random_subspace(ws: WeightedSpace, rank: int, rng: np.random.Generator) -> Subspace:
    return span(ws, random_complex((ws.dim, rank), rng))


def random_companion(S: Subspace, rng: np.random.Generator) -> Subspace:
    """A generic subspace of complementary dimension; complementary with probability one."""
    return random_subspace(S.space, S.dim - S.rank, rng)


def random_low_rank(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    return random_complex((n, rank), rng) @ random_complex((rank, n), rng)


def random_normal_matrix(
    k: int,
    rng: np.random.Generator,
    eigenvalues: Optional[Sequence[complex]] = None,
) -> np.ndarray:
    """U diag(eigenvalues) U*; eigenvalues default to complex Gaussian draws."""
    if eigenvalues is None:
        eigenvalues = random_complex((k,), rng)

    unitary = random_unitary(k, rng)
    return (unitary * np.asarray(eigenvalues, dtype=complex)) @ unitary.conj().T


def random_biorthogonal_system(
    ws: WeightedSpace,
    m: int,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Columns f_1..f_m and h_1..h_m with <f_i, h_j>_L = delta_ij.

    H = A^-1 (F (F* F)^-1 + N R) where the columns of N span the Euclidean
    complement of R(F), so the h-vectors are not L-orthonormal in general.
    """
    f = random_complex((ws.dim, m), rng)
    dual = f @ np.linalg.inv(f.conj().T @ f)

    complement = scipy.linalg.null_space(f.conj().T)
    mixing = random_complex((complement.shape[1], m), rng)

    h = ws.inv_weight @ (dual + complement @ mixing)
    return f, h
