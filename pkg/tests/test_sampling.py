import numpy as np
import pytest

from proper_subspaces.core import inner_L
from proper_subspaces.sampling import (
    generator,
    random_biorthogonal_system,
    random_companion,
    random_low_rank,
    random_normal_matrix,
    random_space,
    random_subspace,
    random_unitary,
    random_weight,
)
from proper_subspaces.subspaces import direct_sum_gap


@pytest.mark.parametrize("n", [1, 2, 5])
def test_random_unitary(n):
    u = random_unitary(n, generator(n))

    assert u.shape == (n, n)
    assert np.allclose(u.conj().T @ u, np.eye(n), atol=1e-12)


def test_random_weight():
    weight = random_weight(6, generator(0))
    eigenvalues = np.linalg.eigvalsh(weight)

    assert np.array_equal(weight, weight.conj().T)
    assert eigenvalues.min() > 0
    assert eigenvalues.max() == pytest.approx(1.0)


def test_random_space_is_valid():
    ws = random_space(5, generator(1))

    assert 1 <= ws.condition <= 1e4 * (1 + 1e-8)


def test_same_seed_gives_same_instance():
    first, second = generator(3), generator(3)

    assert np.array_equal(random_weight(4, first), random_weight(4, second))
    assert np.array_equal(random_unitary(3, first), random_unitary(3, second))


def test_random_subspace_and_companion():
    rng = generator(4)
    ws = random_space(7, rng)
    S = random_subspace(ws, 3, rng)
    T = random_companion(S, rng)

    assert S.rank == 3
    assert T.rank == 4
    assert direct_sum_gap(S, T) > 0


def test_random_low_rank():
    assert np.linalg.matrix_rank(random_low_rank(6, 2, generator(5))) == 2


def test_random_normal_matrix():
    z = random_normal_matrix(4, generator(6))

    assert np.allclose(z @ z.conj().T, z.conj().T @ z, atol=1e-12)


def test_random_normal_matrix_with_given_eigenvalues():
    eigenvalues = [1.0, -1.0, 2j]

    z = random_normal_matrix(3, generator(7), eigenvalues)

    assert np.allclose(np.sort_complex(np.linalg.eigvals(z)), np.sort_complex(eigenvalues))


def test_random_biorthogonal_system():
    rng = generator(8)
    ws = random_space(6, rng)

    f, h = random_biorthogonal_system(ws, 3, rng)

    gram = np.array([[inner_L(ws, fi, hj) for hj in h.T] for fi in f.T])
    assert np.allclose(gram, np.eye(3), atol=1e-8)
    assert not np.allclose(h.conj().T @ ws.weight @ h, np.eye(3))
