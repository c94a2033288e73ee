import numpy as np
import pytest

from proper_subspaces.errors import DimMismatch, SingularSystem
from proper_subspaces.sampling import (
    generator,
    random_complex,
    random_normal_matrix,
    random_unitary,
)
from proper_subspaces.schatten import (
    adz_norm_check,
    block_q,
    commutation_matrix,
    complement_conditions,
    cq_compat_demo,
    lq_compat_demo,
    make_model,
    orbit_subspace_check,
    superop,
    sylvester,
    two_companions_demo,
    z_criterion_margin,
)
from proper_subspaces.utils.helpers import matching_distance, vec


@pytest.fixture
def model2():
    return make_model(2)


@pytest.fixture
def model4():
    return make_model(4)


@pytest.fixture
def symmetry():
    return np.diag([1.0, -1.0])


def test_model_is_trace_normed(model2):
    assert model2.ws.dim == 4
    assert model2.ws.enorm.is_trace
    x = np.arange(4).reshape(2, 2)
    assert np.array_equal(model2.unvec(model2.vec(x)), x)

    with pytest.raises(DimMismatch):
        model2.vec(np.eye(3))


def test_commutation_matrix():
    x = np.arange(9.0).reshape(3, 3)

    assert np.array_equal(commutation_matrix(3) @ vec(x), vec(x.T))


def test_superoperators_act_as_described(model2):
    rng = generator(0)
    a, b, x = (random_complex((2, 2), rng) for _ in range(3))

    def act(kind, *matrices):
        return model2.unvec(superop(model2, kind, *matrices).apply(vec(x)))

    assert np.allclose(act("left", np.eye(2)), x)
    assert np.allclose(act("left", a), a @ x)
    assert np.allclose(act("right", b), x @ b)
    assert np.allclose(act("two_sided", a, b), a @ x @ b)
    assert np.allclose(act("adz", a), a.conj().T @ x @ a)
    assert np.allclose(act("transposed", a, b), a @ x.T @ b)


def test_superop_rejects_bad_arguments(model2):
    with pytest.raises(ValueError):
        superop(model2, "sideways", np.eye(2))
    with pytest.raises(DimMismatch):
        superop(model2, "two_sided", np.eye(2))
    with pytest.raises(DimMismatch):
        superop(model2, "left", np.eye(3))


def test_superop_plus_adjoints(model2):
    rng = generator(44)
    a, z = random_complex((2, 2), rng), random_complex((2, 2), rng)

    left_plus = superop(model2, "left", a).plus.matrix
    adz_plus = superop(model2, "adz", z).plus.matrix

    assert np.allclose(left_plus, superop(model2, "left", a.conj().T).matrix, atol=1e-12)
    assert np.allclose(adz_plus, superop(model2, "two_sided", z, z.conj().T).matrix, atol=1e-12)


def test_adz_eigenvalues(model2):
    values = np.linalg.eigvals(superop(model2, "adz", np.diag([2.0, 3.0])).matrix)

    assert np.allclose(np.sort(values.real), [4, 6, 6, 9])


def test_adz_eigenvalues_of_normal_matrix(model2):
    eigenvalues = np.array([1 + 1j, -0.5 + 2j])
    z = random_normal_matrix(2, generator(1), eigenvalues)

    values = np.linalg.eigvals(superop(model2, "adz", z).matrix)
    products = (np.conj(eigenvalues)[:, None] * eigenvalues[None, :]).ravel()

    assert matching_distance(values, products) <= 1e-8


def test_two_sided_projection_is_proper_projection(model4):
    q = block_q(np.array([[0.5, 1.0], [0.0, -2.0]]))
    c_q = superop(model4, "two_sided", q, q)

    assert np.allclose(c_q.matrix @ c_q.matrix, c_q.matrix)
    q_star = q.conj().T
    expected = superop(model4, "two_sided", q_star, q_star).matrix
    assert np.allclose(c_q.plus.matrix, expected, atol=1e-12)


def test_left_multiplication_spectrum_is_contained(model2):
    a = np.array([[1.0, 2.0], [0.0, 3.0]])

    values = np.linalg.eigvals(superop(model2, "left", a).matrix)

    assert all(np.min(np.abs(np.linalg.eigvals(a) - value)) <= 1e-10 for value in values)


@pytest.mark.parametrize(
    "z",
    [np.zeros((2, 2)), np.diag([1.0, -1.0]), np.array([[0.0, 3.0], [1.0, 2.0]])],
)
def test_block_q(z):
    q = block_q(z)

    assert np.allclose(q @ q, q, atol=1e-15)
    assert np.linalg.matrix_rank(q) == 2


def test_block_q_at_zero_is_orthogonal():
    assert np.array_equal(block_q(np.zeros((2, 2))), np.diag([1.0, 1.0, 0.0, 0.0]))


@pytest.mark.parametrize(
    "z, margin",
    [
        (np.diag([1.0, -1.0]), 0.0),
        (0.5 * np.eye(2), 1.25),
        (np.eye(2), 2.0),
        (np.diag([1.1, -0.9]), 0.01),
    ],
)
def test_z_criterion_margin(z, margin):
    report = z_criterion_margin(z)

    assert report.pair_margin == pytest.approx(margin, abs=1e-12)
    assert report.op_margin == pytest.approx(margin, abs=1e-12)


def test_z_criterion_margins_agree_for_normal_matrices():
    rng = generator(41)
    for _ in range(50):
        report = z_criterion_margin(random_normal_matrix(3, rng))

        assert abs(report.op_margin - report.pair_margin) <= 1e-8


def test_sylvester_with_disjoint_spectra():
    c, d = np.diag([1.0, 2.0]), np.diag([3.0, 4.0])
    w = random_complex((2, 2), generator(2))

    result = sylvester(c, d, w)

    assert result.solvable
    assert np.allclose(c @ result.x - result.x @ d, w)
    assert result.residual <= 1e-12
    assert result.margin == pytest.approx(1.0)


def test_sylvester_with_shared_spectrum():
    c = np.array([[1.0, 1.0], [0.0, 2.0]])

    result = sylvester(c, c, np.eye(2))

    assert not result.solvable
    assert result.x is None
    assert result.margin <= 1e-12

    with pytest.raises(SingularSystem):
        sylvester(c, c, np.eye(2), require_solution=True)


def test_sylvester_margin_for_normal_inputs():
    rng = generator(3)
    c = random_normal_matrix(3, rng, [1.0, 2j, -1.0])
    d = random_normal_matrix(3, rng, [0.5, 3.0, 1 + 1j])

    result = sylvester(c, d, np.eye(3))

    left = np.array([1.0, 2j, -1.0])
    right = np.array([0.5, 3.0, 1 + 1j])
    gaps = np.abs(left[:, None] - right[None, :])
    assert result.margin == pytest.approx(gaps.min(), abs=1e-10)


def test_sylvester_on_random_normal_pairs():
    rng = generator(42)
    for _ in range(100):
        c, d = random_normal_matrix(3, rng), random_normal_matrix(3, rng)
        w = random_complex((3, 3), rng)

        result = sylvester(c, d, w)

        gaps = np.abs(np.linalg.eigvals(c)[:, None] - np.linalg.eigvals(d)[None, :])
        norms = 1 + np.linalg.norm(c, 2) + np.linalg.norm(d, 2)
        scale = norms * (1 + np.linalg.norm(result.x, 2))
        assert result.solvable
        assert result.residual <= 1e-8 * scale
        assert result.margin == pytest.approx(gaps.min(), abs=1e-10)


def test_sylvester_margin_vanishes_with_shared_eigenvalue():
    rng = generator(43)
    for _ in range(20):
        left = random_complex((3,), rng)
        right = random_complex((3,), rng)
        right[0] = left[0]
        c = random_normal_matrix(3, rng, left)
        d = random_normal_matrix(3, rng, right)

        result = sylvester(c, d, np.eye(3))

        assert not result.solvable
        assert result.x is None
        assert result.margin <= 1e-10


def test_sylvester_rejects_mismatched_sizes():
    with pytest.raises(DimMismatch):
        sylvester(np.eye(2), np.eye(3), np.eye(2))


def test_complement_conditions(model4):
    z = np.array([[0.3, 1.0], [-0.7, 0.2]])

    report = complement_conditions(model4, z)

    assert report.derived_matches
    assert not report.printed_matches
    smallest = np.linalg.svd(z, compute_uv=False)[-1]
    assert report.corrected_margin == pytest.approx(1 + smallest**2)


def test_complement_conditions_agree_for_scalar_z(model4):
    report = complement_conditions(model4, 0.5 * np.eye(2))

    assert report.derived_matches and report.printed_matches
    assert report.corrected_margin == pytest.approx(1.25)


def test_cq_compat_demo_orthogonal_case(model4):
    report = cq_compat_demo(model4, np.zeros((2, 2)))

    assert report.margin_default == pytest.approx(1.0)
    assert report.pair_margin == pytest.approx(1.0)


def test_cq_compat_demo_symmetry(model4, symmetry):
    report = cq_compat_demo(model4, symmetry)

    assert report.pair_margin == pytest.approx(0.0, abs=1e-12)
    assert report.op_margin == pytest.approx(0.0, abs=1e-12)
    assert report.margin_default > 0
    assert report.derived_matches


def test_cq_compat_demo_contraction(model4):
    report = cq_compat_demo(model4, 0.5 * np.eye(2))

    assert report.pair_margin == pytest.approx(1.25)
    assert report.margin_default > 0
    assert report.margin_nullspace > 0


def test_cq_compat_demo_requires_block_model(model2, symmetry):
    with pytest.raises(DimMismatch):
        cq_compat_demo(model2, symmetry)


def test_two_companions_demo(model4, symmetry):
    report = two_companions_demo(model4, 0.5 * np.eye(2), symmetry)

    assert report.ok
    assert report.null_fixed_angle <= 1e-8
    assert report.g_proper_invertible
    assert np.isfinite(report.cond_g) and np.isfinite(report.cond_g_plus)
    assert report.transported_matches
    assert report.original_pair_margin == pytest.approx(1.25)
    assert report.transported_pair_margin == pytest.approx(0.0, abs=1e-12)


def test_two_companions_demo_with_trivial_symmetry(model4):
    report = two_companions_demo(model4, 0.5 * np.eye(2), np.eye(2))

    assert report.ok
    assert report.transported_pair_margin == pytest.approx(2.0)


def test_two_companions_demo_reports_violations(model4, symmetry):
    report = two_companions_demo(model4, np.zeros((2, 2)), 2 * symmetry)

    assert not report.ok
    assert "z is not invertible" in report.violations
    assert "t is not a symmetry" in report.violations


def test_adz_norm_check(model2):
    report = adz_norm_check(model2, np.eye(2))
    assert report.frob_norm == pytest.approx(1.0)
    assert report.trace_norm_estimate == pytest.approx(1.0)
    assert report.znorm_sq == pytest.approx(1.0)

    report = adz_norm_check(model2, np.diag([2.0, 3.0]))
    assert report.frob_norm == pytest.approx(9.0)
    assert report.holds


def test_adz_norm_check_on_random_matrix():
    report = adz_norm_check(make_model(4), random_complex((4, 4), generator(4)))

    assert report.holds
    assert report.frob_norm == pytest.approx(report.znorm_sq, rel=1e-10)


def test_lq_compat_demo():
    q = block_q(np.array([[1.0]]))

    report = lq_compat_demo(make_model(2), q)

    assert report.plus_residual <= 1e-12
    assert report.margin_c >= 1 - 1e-10
    assert report.direct_margin == pytest.approx(report.margin_c)
    assert report.min_c_squared >= 1 - 1e-10


def test_orbit_subspace_check(model4):
    rng = generator(5)
    z = random_complex((2, 2), rng)

    report = orbit_subspace_check(model4, z, random_unitary(4, rng), random_unitary(4, rng))

    assert report.matches
