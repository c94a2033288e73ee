import numpy as np
import pytest

from proper_subspaces.compat import compat_projection
from proper_subspaces.core import Operator, euclidean_space, make_space
from proper_subspaces.errors import ContourTooClose, NotIdempotent, NotIsolated
from proper_subspaces.sampling import (
    generator,
    random_companion,
    random_operator,
    random_space,
    random_subspace,
    random_unitary,
)
from proper_subspaces.spectra import (
    check_contour,
    riesz_projection,
    spectrum,
    vvplus_diagnostics,
)
from proper_subspaces.subspaces import oblique_projection, span


@pytest.fixture
def diagonal():
    return Operator(np.diag([1.0, 2.0]), euclidean_space(2))


@pytest.fixture
def jordan():
    return Operator(np.array([[1.0, 1.0], [0.0, 1.0]]), euclidean_space(2))


@pytest.mark.parametrize("algebra", ["E", "L", "P"])
def test_spectrum_of_diagonal(diagonal, algebra):
    report = spectrum(diagonal, algebra)

    assert np.allclose(report.values, [1, 2])
    assert np.allclose(report.gaps, [1, 1])


def test_spectrum_algebras_agree_with_weight():
    ws = make_space(3, np.diag([1.0, 0.5, 0.25]))
    t = random_operator(ws, generator(3))

    values_e = spectrum(t, "E").values

    assert np.allclose(spectrum(t, "L").values, values_e, atol=1e-8)
    assert spectrum(t, "P").values.size == values_e.size
    assert np.allclose(spectrum(t, "P").values, values_e)


def test_spectrum_marks_repeated_points_as_isolated(jordan):
    report = spectrum(jordan, "E")

    assert np.all(np.isinf(report.gaps))


def test_spectrum_rejects_unknown_algebra(diagonal):
    with pytest.raises(ValueError):
        spectrum(diagonal, "Q")


def test_riesz_projection_of_diagonal(diagonal):
    result = riesz_projection(diagonal, 1, 0.4, 64)

    assert np.allclose(result.proj.p.matrix, np.diag([1.0, 0.0]), atol=1e-8)
    assert result.range_dim == 1
    assert result.idempotency_res <= 1e-8
    assert result.plus_res <= 1e-8


def test_riesz_projection_with_empty_contour(diagonal):
    result = riesz_projection(diagonal, 5, 0.4)

    assert np.allclose(result.proj.p.matrix, 0, atol=1e-12)
    assert result.range_dim == 0


def test_riesz_projection_of_jordan_block(jordan):
    result = riesz_projection(jordan, 1, 0.3)

    assert np.allclose(result.proj.p.matrix, np.eye(2), atol=1e-12)
    assert result.range_dim == 2


def test_riesz_projection_plus_adjoint_with_weight():
    ws = make_space(2, np.diag([1.0, 0.25]))
    t = Operator(np.array([[1.0, 3.0], [0.0, 2.0]]), ws)

    result = riesz_projection(t, 2, 0.4)
    q = result.proj.p.matrix

    assert result.range_dim == 1
    assert np.allclose(q @ q, q, atol=1e-10)
    assert result.plus_res <= 1e-10


def test_riesz_projection_on_random_operators():
    rng = generator(12)
    for _ in range(10):
        ws = random_space(6, rng)
        t = random_operator(ws, rng)
        values = spectrum(t, "E").values
        lam = values[0]
        eps = 0.3 * np.min(np.abs(values[1:] - lam))

        result = riesz_projection(t, lam, eps)

        scale = max(1.0, np.linalg.norm(result.proj.p.matrix, 2)) * ws.condition
        assert result.plus_res <= 1e-9 * scale
        assert result.range_dim == 1


def test_riesz_projection_converges_geometrically(diagonal):
    def error(m):
        q = riesz_projection(diagonal, 1, 0.4, m).proj.p.matrix
        return np.linalg.norm(q - np.diag([1.0, 0.0]), 2)

    coarse, fine = error(16), error(32)

    # the pole at 2 contributes about 0.4**m
    assert coarse > 1e-8
    assert fine <= max(10 * coarse**2, 1e-12)


@pytest.mark.parametrize("eps, m", [(0.0, 64), (-1.0, 64), (0.4, 8), (0.4, 33)])
def test_riesz_projection_rejects_bad_quadrature(diagonal, eps, m):
    with pytest.raises(ValueError):
        riesz_projection(diagonal, 1, eps, m)


def test_check_contour():
    ws = euclidean_space(2)

    with pytest.raises(ContourTooClose):
        check_contour(Operator(np.diag([1.0, 1.5]), ws), 1, 0.4)
    with pytest.raises(NotIsolated):
        check_contour(Operator(np.diag([1.0, 1.7]), ws), 1, 0.4)

    check_contour(Operator(np.diag([1.0, 2.0]), ws), 1, 0.4)


def test_vvplus_diagnostics_for_compatible_projection():
    rng = generator(13)
    ws = random_space(6, rng)
    q = compat_projection(random_subspace(ws, 2, rng)).p

    report = vvplus_diagnostics(q)

    assert np.allclose(report.spec_vvplus, 1, atol=1e-8)
    assert report.min_symmetric == pytest.approx(2.0, abs=1e-8)
    assert report.positive


def test_vvplus_diagnostics_for_tilted_pair():
    ws = euclidean_space(2)
    e1 = span(ws, [[1.0, 0.0]])
    minima = []
    for theta in (1.0, 0.3, 0.1):
        line = span(ws, [[np.cos(theta), np.sin(theta)]])
        report = vvplus_diagnostics(oblique_projection(e1, line).p)

        t = report.spec_vvplus.real
        assert report.positive
        assert t[0] * t[1] == pytest.approx(1.0)
        minima.append(report.min_symmetric)

    assert all(value >= 2 - 1e-12 for value in minima)
    assert minima == sorted(minima)


def test_vvplus_diagnostics_on_random_oblique_projection():
    rng = generator(14)
    ws = random_space(10, rng)
    S = random_subspace(ws, 4, rng)

    report = vvplus_diagnostics(oblique_projection(S, random_companion(S, rng)).p)

    assert report.positive


def test_vvplus_spectrum_is_positive_over_random_projections():
    rng = generator(15)
    for _ in range(100):
        ws = random_space(6, rng)
        S = random_subspace(ws, 3, rng)

        report = vvplus_diagnostics(oblique_projection(S, random_companion(S, rng)).p)

        assert report.positive
        assert np.all(report.spec_vvplus.real > 0)


def test_spectrum_of_defective_operator_in_weighted_space():
    rng = generator(5)
    ws = random_space(4, rng)
    unitary = random_unitary(4, rng)
    jordan = np.eye(4) + np.diag(np.ones(3), 1)
    t = Operator(unitary @ jordan @ unitary.conj().T, ws)

    report = spectrum(t, "L")

    assert report.values.size == 4
    assert np.all(np.abs(report.values - 1) <= 1e-2)
    assert np.isfinite(report.mismatch)
    assert report.mismatch <= 1e-2
    assert spectrum(t, "E").mismatch == 0.0


def test_vvplus_diagnostics_requires_projection(diagonal):
    with pytest.raises(NotIdempotent):
        vvplus_diagnostics(diagonal)
