import csv
import dataclasses
import io
import json
import math
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from proper_subspaces.core import Operator, WeightedSpace
from proper_subspaces.subspaces import Subspace


def to_serializable(value: Any) -> Any:
    """
    Convert reports into JSON-ready values.

    Complex numbers become ``[re, im]``, arrays become nested lists, operators
    become their matrices and non-finite floats become ``None``.
    """
    if value is None or isinstance(value, (bool, str)):
        return value

    if isinstance(value, np.bool_):
        return bool(value)

    if isinstance(value, (int, np.integer)):
        return int(value)

    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None

    if isinstance(value, (complex, np.complexfloating)):
        return [to_serializable(value.real), to_serializable(value.imag)]

    if isinstance(value, np.ndarray):
        return [to_serializable(item) for item in value]

    if isinstance(value, Operator):
        return to_serializable(value.matrix)

    if isinstance(value, Subspace):
        return {"dim": value.dim, "rank": value.rank}

    if isinstance(value, WeightedSpace):
        return {"dim": value.dim, "enorm": str(value.enorm)}

    if dataclasses.is_dataclass(value):
        return {
            field.name: to_serializable(getattr(value, field.name))
            for field in dataclasses.fields(value)
        }

    if isinstance(value, dict):
        return {str(key): to_serializable(item) for key, item in value.items()}

    if isinstance(value, (list, tuple)):
        return [to_serializable(item) for item in value]

    raise TypeError(f"Cannot serialize {type(value).__name__}")


def format_cell(value: Any) -> str:
    """CSV cell text; missing values are empty."""
    value = to_serializable(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


class ReportFormatter:
    def __init__(self, report: Any) -> None:
        self._report = report

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable(self._report)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), allow_nan=False)

    def to_csv(self) -> str:
        """One header line and one value line; nested values are JSON-encoded."""
        data = self.to_dict()
        if not isinstance(data, dict):
            raise TypeError("Only mapping reports can be written as CSV")
        return rows_to_csv(list(data), [[data[key] for key in data]])


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)

    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])

    return buffer.getvalue()


def rows_to_json(rows: List[Dict[str, Any]]) -> str:
    return json.dumps(to_serializable(rows), separators=(",", ":"), allow_nan=False)
