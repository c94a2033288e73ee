import math

import pytest

from proper_subspaces import suites
from proper_subspaces.errors import NotComplementary
from proper_subspaces.suites import SUITES, SuiteSummary, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    summary = run_suite(name, trials=5, dim=6, seed=1, tol=1e-9)

    assert summary.suite == name
    assert summary.trials == 5
    assert summary.passed, summary.max_residual


def test_suite_is_deterministic():
    first = run_suite("compat", trials=3, dim=5, seed=42, tol=1e-9)
    second = run_suite("compat", trials=3, dim=5, seed=42, tol=1e-9)

    assert first == second


@pytest.mark.parametrize("dim", [2, 3])
def test_suite_on_small_dimensions(dim):
    assert run_suite("buckholtz", trials=4, dim=dim, seed=0, tol=1e-9).passed


@pytest.mark.parametrize(
    "name, trials, dim",
    [("unknown", 1, 4), ("gz", 1, 1), ("gz", 0, 4)],
)
def test_run_suite_rejects_arguments(name, trials, dim):
    with pytest.raises(ValueError):
        run_suite(name, trials=trials, dim=dim, seed=0, tol=1e-9)


def test_failing_trial_is_reported(mocker):
    def failing(rng, dim):
        raise NotComplementary("generated pair is degenerate")

    mocker.patch.dict(suites.SUITES, {"failing": failing})

    summary = run_suite("failing", trials=2, dim=4, seed=0, tol=1e-9)

    assert math.isinf(summary.max_residual)
    assert not summary.passed


def test_trials_use_distinct_seeds(mocker):
    draws = []

    def recording(rng, dim):
        draws.append(float(rng.uniform()))
        return 0.0

    mocker.patch.dict(suites.SUITES, {"recording": recording})

    run_suite("recording", trials=3, dim=4, seed=5, tol=1e-9)

    assert len(set(draws)) == 3


def test_suite_summary_to_dict():
    summary = SuiteSummary(suite="gz", trials=2, max_residual=0.0, passed=True)

    assert summary.to_dict() == {
        "suite": "gz",
        "trials": 2,
        "max_residual": 0.0,
        "pass": True,
    }
