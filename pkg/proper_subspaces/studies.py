"""
Truncation studies: families of growing finite models whose margins record what
fails in infinite dimension.
"""
import logging
import sys
from dataclasses import dataclass, field
from typing import Dict, IO, List, Optional, Sequence, Union

import numpy as np

from .compat import compat_margin
from .core import make_space, vector_norm
from .errors import BadExponent, IoFailure
from .schatten import (
    block_q,
    complement_conditions,
    make_model,
    superop,
    z_criterion_margin,
)
from .spectra import vvplus_diagnostics
from .subspaces import complement_L, kernel, range_of, span
from .utils.formatter import rows_to_csv, rows_to_json

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

TOL_MONOTONE = 1e-12
BASE_COLUMNS = ["n", "margin_c", "q_norm", "g_enorm"]


@dataclass(frozen=True)
class StudyRow:
    n: int
    margin_c: float
    q_norm: float
    g_enorm: Optional[float] = None
    aux: Dict[str, float] = field(default_factory=dict)


def _require_increasing(values: Sequence[int], name: str) -> None:
    if not values:
        raise ValueError(f"{name} must not be empty")
    if any(later <= earlier for earlier, later in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing, got {list(values)}")


def diverging_vector_study(
    n_list: Sequence[int],
    beta: float,
    control: bool = False,
) -> List[StudyRow]:
    """
    S_n = {g}^perp in the weight diag(i^-2), with g_i = i^-beta.

    g has bounded L-norm but unbounded E-norm as n grows, and ||Q_{S_n}|| follows
    ||g|| ||A g|| / <g, g>_L upward. With ``control`` g = e1 and every row is the same.
    """
    if not 0 < beta <= 0.5:
        raise BadExponent(f"beta must lie in (0, 1/2], got {beta}")
    _require_increasing(n_list, "n_list")

    rows = []
    for n in n_list:
        index = np.arange(1, n + 1, dtype=float)
        ws = make_space(n, np.diag(index**-2))

        if control:
            g = np.zeros(n)
            g[0] = 1.0
        else:
            g = index**-beta

        report = compat_margin(complement_L(span(ws, [g])))
        rows.append(
            StudyRow(
                n=n,
                margin_c=report.margin_c,
                q_norm=report.q_norm,
                g_enorm=vector_norm(ws, g, "E"),
                aux={"g_lnorm": vector_norm(ws, g, "L")},
            )
        )
        log.debug("diverging vector n=%d: q_norm %.6g", n, report.q_norm)

    return rows


def symmetry_truncation_study(
    k_list: Sequence[int],
    shift: float = 0.0,
) -> List[StudyRow]:
    """
    z_k = diag(1, ..., 1, -1, ..., -1) + shift I and S = {q x q} for q = block_q(z_k).

    Records the eigenvalue criterion of z_k, the compatibility margin of S against
    N(C_q), the V V+ diagnostic of C_q and the margin of the corrected reduction.
    """
    _require_increasing(k_list, "k_list")

    rows = []
    for k in k_list:
        if k < 2 or k % 2:
            raise ValueError(f"Every k must be even and at least 2, got {k}")

        z = np.diag(np.concatenate([np.ones(k // 2), -np.ones(k // 2)])) + shift * np.eye(k)
        model = make_model(2 * k)
        q = block_q(z)
        c_q = superop(model, "two_sided", q, q)

        criterion = z_criterion_margin(z)
        report = compat_margin(range_of(c_q), kernel(c_q))
        rows.append(
            StudyRow(
                n=k,
                margin_c=report.margin_c,
                q_norm=report.q_norm,
                aux={
                    "pair_margin": criterion.pair_margin,
                    "op_margin": criterion.op_margin,
                    "min_symmetric": vvplus_diagnostics(c_q).min_symmetric,
                    "corrected_margin": complement_conditions(model, z).corrected_margin,
                },
            )
        )
        log.debug("symmetry k=%d: pair margin %.3e", k, criterion.pair_margin)

    return rows


def is_monotone(
    values: Sequence[float],
    strict: bool = False,
    tol: float = TOL_MONOTONE,
) -> bool:
    pairs = list(zip(values, values[1:]))
    if strict:
        return all(later > earlier for earlier, later in pairs)
    return all(later >= earlier - tol for earlier, later in pairs)


def _aux_columns(rows: Sequence[StudyRow]) -> List[str]:
    columns: List[str] = []
    for row in rows:
        columns.extend(key for key in row.aux if key not in columns)
    return columns


def render(rows: Sequence[StudyRow], format: str = "csv") -> str:
    if format == "csv":
        aux_columns = _aux_columns(rows)
        return rows_to_csv(
            BASE_COLUMNS + aux_columns,
            (
                [row.n, row.margin_c, row.q_norm, row.g_enorm]
                + [row.aux.get(key) for key in aux_columns]
                for row in rows
            ),
        )

    if format == "json":
        return rows_to_json(
            [
                {
                    "n": row.n,
                    "margin_c": row.margin_c,
                    "q_norm": row.q_norm,
                    "g_enorm": row.g_enorm,
                    "aux": row.aux,
                }
                for row in rows
            ]
        ) + "\n"

    raise ValueError(f"Unknown format {format!r}, expected 'csv' or 'json'")


def emit(
    rows: Sequence[StudyRow],
    format: str = "csv",
    sink: Union[str, IO[str], None] = None,
) -> None:
    """Write rows to a path, an open text stream, or standard output."""
    text = render(rows, format)

    try:
        if sink is None:
            sys.stdout.write(text)
        elif isinstance(sink, str):
            with open(sink, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        else:
            sink.write(text)
    except OSError as error:
        raise IoFailure(f"Cannot write study rows: {error}") from error
