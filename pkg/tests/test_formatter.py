import json
from dataclasses import dataclass

import numpy as np
import pytest

from proper_subspaces.core import Operator
from proper_subspaces.schatten import z_criterion_margin
from proper_subspaces.utils.formatter import (
    ReportFormatter,
    format_cell,
    rows_to_csv,
    rows_to_json,
    to_serializable,
)
from .test_subspaces import e1_line, plane


@dataclass(frozen=True)
class Sample:
    value: complex
    flags: tuple


def test_to_serializable_scalars():
    assert to_serializable(1 - 2j) == [1.0, -2.0]
    assert to_serializable(np.float64(0.5)) == 0.5
    assert to_serializable(np.int64(3)) == 3
    assert to_serializable(np.bool_(True)) is True
    assert to_serializable(float("nan")) is None
    assert to_serializable(float("inf")) is None
    assert to_serializable(None) is None


def test_to_serializable_containers():
    assert to_serializable(np.array([1.0, np.inf])) == [1.0, None]
    assert to_serializable({1: (2, "x")}) == {"1": [2, "x"]}
    assert to_serializable(Sample(value=1j, flags=(True,))) == {
        "value": [0.0, 1.0],
        "flags": [True],
    }


def test_to_serializable_model_objects(plane, e1_line):
    operator = Operator(np.diag([1.0, 0.0]), plane)

    assert to_serializable(operator) == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    assert to_serializable(e1_line) == {"dim": 2, "rank": 1}
    assert to_serializable(plane) == {"dim": 2, "enorm": "euclid"}


def test_to_serializable_rejects_unknown_types():
    with pytest.raises(TypeError):
        to_serializable(object())


@pytest.mark.parametrize(
    "value, text",
    [(None, ""), (float("nan"), ""), (True, "true"), (2, "2"), (0.25, "0.25"), (1j, "[0.0,1.0]")],
)
def test_format_cell(value, text):
    assert format_cell(value) == text


def test_report_formatter_json():
    report = z_criterion_margin(np.diag([1.0, -1.0]))

    data = json.loads(ReportFormatter(report).to_json())

    assert data["pair_margin"] == pytest.approx(0.0, abs=1e-12)
    assert "op_margin" in data


def test_report_formatter_csv():
    formatter = ReportFormatter({"suite": "gz", "max_residual": float("inf"), "pass": False})

    assert formatter.to_csv() == "suite,max_residual,pass\ngz,,false\n"


def test_report_formatter_csv_requires_mapping():
    with pytest.raises(TypeError):
        ReportFormatter([1, 2]).to_csv()


def test_rows_to_csv_and_json():
    assert rows_to_csv(["n", "x"], [[1, 0.5], [2, None]]) == "n,x\n1,0.5\n2,\n"
    assert rows_to_json([{"n": 1, "x": np.nan}]) == '[{"n":1,"x":null}]'
