"""
Randomized identity suites. Each trial draws its instance from the generator seeded
with ``seed ^ trial`` and returns a scale-free residual; a suite passes when the
largest residual is at most the tolerance.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from . import compat, core, spectra, subspaces
from .errors import IllConditioned, ProperSubspacesError
from .sampling import (
    generator,
    random_companion,
    random_complex,
    random_low_rank,
    random_operator,
    random_space,
    random_subspace,
)
from .utils.helpers import matching_distance, spectral_norm

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class SuiteSummary:
    suite: str
    trials: int
    max_residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "pass": self.passed,
        }


def _half_rank(n: int, rng: np.random.Generator) -> int:
    return int(rng.integers(1, n)) if n > 1 else 1


def adjoint_trial(rng: np.random.Generator, dim: int) -> float:
    ws = random_space(dim, rng)
    t = random_operator(ws, rng)
    s = random_operator(ws, rng)

    scale = spectral_norm(t.matrix) * ws.condition
    defining = core.adjoint_identity_residual(t) / scale
    involution = spectral_norm(t.plus.plus.matrix - t.matrix) / scale
    reversal = spectral_norm((t @ s).plus.matrix - (s.plus @ t.plus).matrix) / (
        scale * spectral_norm(s.matrix)
    )
    return max(defining, involution, reversal)


def buckholtz_trial(rng: np.random.Generator, dim: int) -> float:
    ws = random_space(dim, rng)
    S = random_subspace(ws, _half_rank(dim, rng), rng)
    T = random_companion(S, rng)

    report = compat.buckholtz_verify(S, T)
    scale = report.kappa * ws.condition
    return max(report.res1, report.res2, compat.symm_identity_verify(S, T)) / scale


def compat_trial(rng: np.random.Generator, dim: int) -> float:
    """Q_S through two companions, against each other and the direct construction."""
    ws = random_space(dim, rng)
    S = random_subspace(ws, _half_rank(dim, rng), rng)
    first, second = random_companion(S, rng), random_companion(S, rng)

    residuals = []
    formulas = []
    kappas = []
    for T in (first, second):
        c = compat.c_operator(S, T)
        p_plus = subspaces.oblique_projection(S, T).p_plus
        formulas.append(np.linalg.solve(c.matrix, p_plus.matrix))

        kappa = np.linalg.cond(c.matrix) * ws.condition
        kappas.append(kappa)
        projection = compat.compat_projection(S, T)
        residuals.append(projection.cross_residual / kappa)
        residuals.append(spectral_norm(c.plus.matrix - c.matrix) / kappa)

    q = compat.orthogonal_projection_L(S)
    residuals.append(spectral_norm(q.plus.matrix - q.matrix) / ws.condition)
    residuals.append(spectral_norm(formulas[0] - formulas[1]) / max(kappas))
    return max(residuals)


def krein_trial(rng: np.random.Generator, dim: int) -> float:
    ws = random_space(dim, rng)
    S = random_subspace(ws, _half_rank(dim, rng), rng)

    q = compat.compat_projection(S).p
    if not compat.krein_check(S, q):
        return float("inf")

    oblique = subspaces.oblique_projection(S, random_companion(S, rng)).p
    if compat.krein_check(S, oblique):
        return float("inf")

    gap = subspaces.containment_gap(subspaces.kernel(q), subspaces.complement_L(S))
    return gap / ws.condition


def lemma_trial(rng: np.random.Generator, dim: int) -> float:
    ws = random_space(dim, rng)
    rank = _half_rank(dim, rng)

    t = core.Operator(random_low_rank(dim, rank, rng), ws)
    nullspaces = subspaces.nullspace_plus_check(t)

    first = core.Operator(random_low_rank(dim, rank, rng), ws)
    second = core.Operator(random_low_rank(dim, dim - rank, rng), ws)

    # same row space: N(T1) + N(T2) is a proper subspace
    shared = dim // 2
    rows = random_complex((shared, dim), rng)
    third = core.Operator(random_complex((dim, shared), rng) @ rows, ws)
    fourth = core.Operator(random_complex((dim, shared), rng) @ rows, ws)

    for report in (
        compat.algebraic_lemma_check(first, second),
        compat.algebraic_lemma_check(third, fourth),
    ):
        if not (report.equivalence_holds and report.remark_holds):
            return float("inf")

    return max(nullspaces.angle_kernel, nullspaces.angle_range) / ws.condition


def gz_trial(rng: np.random.Generator, dim: int) -> float:
    ws = random_space(dim, rng)
    report = core.gz_bound_check(random_operator(ws, rng))
    return max(0.0, report.lhs_squared - report.rhs) / max(1.0, report.rhs)


def spectra_trial(rng: np.random.Generator, dim: int) -> float:
    """sigma_P against sigma_E, and the plus-adjoint of a Riesz projection."""
    ws = random_space(dim, rng)
    t = random_operator(ws, rng)
    scale = 1.0 + spectral_norm(t.matrix)

    values_e = spectra.spectrum(t, "E").values
    collapse = matching_distance(spectra.spectrum(t, "P").values, values_e) / scale

    lam = values_e[int(rng.integers(values_e.size))]
    others = np.abs(values_e - lam)
    others = others[others > 0]
    eps = 0.3 * others.min() if others.size else 0.5

    riesz = spectra.riesz_projection(t, lam, eps)
    plus = riesz.plus_res / (max(1.0, spectral_norm(riesz.proj.p.matrix)) * ws.condition)
    return max(collapse, plus)


SUITES: Dict[str, Callable[[np.random.Generator, int], float]] = {
    "adjoint": adjoint_trial,
    "buckholtz": buckholtz_trial,
    "compat": compat_trial,
    "krein": krein_trial,
    "lemma": lemma_trial,
    "gz": gz_trial,
    "spectra": spectra_trial,
}


def run_suite(name: str, trials: int, dim: int, seed: int, tol: float) -> SuiteSummary:
    if name not in SUITES:
        raise ValueError(f"Unknown suite {name!r}, expected one of {sorted(SUITES)}")
    if dim < 2 or trials < 1:
        raise ValueError("Suites need dim >= 2 and at least one trial")

    trial_function = SUITES[name]
    max_residual = 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditioned)
        for trial in range(trials):
            rng = generator(seed ^ trial)
            try:
                residual = trial_function(rng, dim)
            except ProperSubspacesError as error:
                log.warning("%s trial %d failed: %s", name, trial, error)
                residual = float("inf")

            log.debug("%s trial %d residual %.3e", name, trial, residual)
            max_residual = max(max_residual, residual)

    return SuiteSummary(
        suite=name,
        trials=trials,
        max_residual=max_residual,
        passed=bool(max_residual <= tol),
    )
