from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector, so that ``vec(a x b) = (b^T kron a) vec(x)``."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray, k: int) -> np.ndarray:
    """
    Inverse of :func:`vec` for k x k matrices.

    Example:
        vector: (a, c, b, d)
        k: 2

        Returns:
            [[a, b],
             [c, d]]
    """
    return np.asarray(vector).reshape(k, k, order="F")


def numerical_rank(matrix: np.ndarray, tol_rank: float) -> int:
    """Number of singular values above ``tol_rank`` times the largest one."""
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0

    singular_values = scipy.linalg.svdvals(matrix)
    if singular_values[0] == 0.0:
        return 0

    return int(np.count_nonzero(singular_values > tol_rank * singular_values[0]))


def smallest_singular_value(matrix: np.ndarray) -> float:
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(matrix)[-1])


def spectral_norm(matrix: np.ndarray) -> float:
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(matrix)[0])


def match_multisets(
    first: Sequence[complex],
    second: Sequence[complex],
    tol: float,
) -> Tuple[List[Tuple[int, int]], List[int], List[int]]:
    """
    Greedy bipartite matching of two multisets of complex numbers.

    Pairs are taken closest first and accepted while their distance is at most
    :param tol. Returns the matched index pairs and the unmatched indices of
    each side.
    """
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)

    if first.size == 0 or second.size == 0:
        return [], list(range(first.size)), list(range(second.size))

    distances = np.abs(first[:, None] - second[None, :])
    order = np.argsort(distances, axis=None, kind="stable")

    used_first, used_second = set(), set()
    pairs = []
    for flat_index in order:
        i, j = np.unravel_index(flat_index, distances.shape)
        if distances[i, j] > tol:
            break
        if i in used_first or j in used_second:
            continue
        used_first.add(i)
        used_second.add(j)
        pairs.append((int(i), int(j)))

    unmatched_first = [i for i in range(first.size) if i not in used_first]
    unmatched_second = [j for j in range(second.size) if j not in used_second]

    return sorted(pairs), unmatched_first, unmatched_second


def matching_distance(
    first: Sequence[complex],
    second: Sequence[complex],
) -> float:
    """
    Largest pair distance of the greedy matching between two multisets of equal size.

    Returns ``inf`` when the sizes differ.
    """
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)

    if first.size != second.size:
        return float("inf")
    if first.size == 0:
        return 0.0

    pairs, _, _ = match_multisets(first, second, tol=float("inf"))
    return float(max(abs(first[i] - second[j]) for i, j in pairs))
