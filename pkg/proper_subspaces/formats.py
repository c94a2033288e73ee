"""
Text formats shared by the library and the command line.

Matrix text: a first line ``rows cols`` followed by ``rows`` lines of whitespace
separated ``re,im`` pairs. Subspace text: a header ``subspace n r`` followed by the
basis in matrix text. Matrix literals: ``diag:a,b,...``, ``scalar:c`` or ``file:PATH``.
"""
import math
from typing import Optional

import numpy as np

from .core import WeightedSpace
from .errors import DimMismatch, MatrixFormatError
from .subspaces import Subspace, span


def _parse_number(text: str) -> complex:
    try:
        value = complex(text.strip().replace(" ", ""))
    except ValueError:
        raise MatrixFormatError(f"Not a number: {text!r}") from None

    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise MatrixFormatError(f"Non-finite entry {text!r}")
    return value


def _parse_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise MatrixFormatError(f"Expected a 're,im' pair, got {text!r}")

    real, imag = (_parse_number(part) for part in parts)
    if real.imag or imag.imag:
        raise MatrixFormatError(f"Pair components must be real, got {text!r}")
    return complex(real.real, imag.real)


def parse_matrix_text(text: str) -> np.ndarray:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise MatrixFormatError("Empty matrix text")

    try:
        rows, cols = (int(token) for token in lines[0].split())
    except ValueError:
        raise MatrixFormatError(f"Bad matrix header {lines[0]!r}") from None

    if rows < 0 or cols < 0 or len(lines) - 1 != rows:
        raise MatrixFormatError(f"Header announces {rows} rows, found {len(lines) - 1}")

    matrix = np.zeros((rows, cols), dtype=complex)
    for i, line in enumerate(lines[1:]):
        entries = line.split()
        if len(entries) != cols:
            raise MatrixFormatError(f"Row {i + 1} has {len(entries)} entries, expected {cols}")
        matrix[i] = [_parse_pair(entry) for entry in entries]

    return matrix


def format_matrix_text(matrix: np.ndarray) -> str:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    lines = [f"{matrix.shape[0]} {matrix.shape[1]}"]

    for row in matrix:
        lines.append(" ".join(f"{float(value.real)!r},{float(value.imag)!r}" for value in row))

    return "\n".join(lines) + "\n"


def parse_subspace_text(text: str, ws: WeightedSpace) -> Subspace:
    header, _, body = text.lstrip().partition("\n")
    tokens = header.split()
    if len(tokens) != 3 or tokens[0] != "subspace":
        raise MatrixFormatError(f"Bad subspace header {header!r}")

    try:
        n, r = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise MatrixFormatError(f"Bad subspace header {header!r}") from None

    if n != ws.dim:
        raise DimMismatch(f"Subspace of C^{n} read for a {ws.dim}-dimensional space")

    basis = parse_matrix_text(body) if r else np.zeros((n, 0), dtype=complex)
    if basis.shape != (n, r):
        raise MatrixFormatError(f"Basis has shape {basis.shape}, header says {(n, r)}")

    return span(ws, basis)


def format_subspace_text(S: Subspace) -> str:
    text = f"subspace {S.dim} {S.rank}\n"
    if S.rank:
        text += format_matrix_text(S.basis)
    return text


def parse_matrix_literal(literal: str, size: Optional[int] = None) -> np.ndarray:
    """
    ``diag:a,b`` gives diag(a, b), ``scalar:c`` gives c times the identity of
    :param size, and ``file:PATH`` reads matrix text. Raises DimMismatch when the
    result is not :param size square.
    """
    kind, separator, payload = literal.partition(":")
    if not separator:
        raise MatrixFormatError(f"Matrix literal {literal!r} has no kind prefix")

    if kind == "diag":
        matrix = np.diag([_parse_number(item) for item in payload.split(",")])

    elif kind == "scalar":
        if size is None:
            raise MatrixFormatError("A scalar literal needs a matrix size")
        matrix = _parse_number(payload) * np.eye(size, dtype=complex)

    elif kind == "file":
        try:
            with open(payload, "r", encoding="utf-8") as handle:
                matrix = parse_matrix_text(handle.read())
        except OSError as error:
            raise MatrixFormatError(f"Cannot read {payload!r}: {error}") from error

    else:
        raise MatrixFormatError(f"Unknown matrix literal kind {kind!r}")

    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimMismatch(f"Matrix literal {literal!r} is not square")
    if size is not None and matrix.shape[0] != size:
        raise DimMismatch(f"Matrix literal {literal!r} is not {size}x{size}")

    return matrix
