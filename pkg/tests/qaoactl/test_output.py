from __future__ import annotations

import json

import pytest

from qaoactl.cli.output import emit
from qaoactl.core.models import AggregateRecord


def _row(**overrides: object) -> AggregateRecord:
    values: dict[str, object] = {
        "size": 8,
        "edge_prob": 0.6,
        "depth": 1,
        "method": "warm",
        "cases": 10,
        "mean_best_loss": -7.5,
        "var_best_loss": 0.25,
        "mean_trace": [0.0, -1.0],
        "var_trace": [0.0, 0.1],
    }
    return AggregateRecord.model_validate({**values, **overrides})


def test_json_output_drops_traces(capsys: pytest.CaptureFixture[str]) -> None:
    emit({"kind": "mvc-warmstart", "aggregates": [_row()]}, as_json=True)
    data = json.loads(capsys.readouterr().out)
    (row,) = data["aggregates"]
    assert row["method"] == "warm"
    assert row["mean_best_loss"] == -7.5
    assert "mean_trace" not in row and "var_trace" not in row


def test_text_output_renders_rows_as_table(capsys: pytest.CaptureFixture[str]) -> None:
    emit({"kind": "mvc-warmstart", "cases": 10, "aggregates": [_row(), _row(method="cold")]}, as_json=False)
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "kind      : mvc-warmstart"
    assert lines[2] == "aggregates:"
    assert lines[3].startswith("  size=8 edge_prob=0.6 depth=1 method=warm")
    assert "mean_probability=-" in lines[3]
    assert lines[4].startswith("  size=8 edge_prob=0.6 depth=1 method=cold")


def test_bare_model_and_scalars(capsys: pytest.CaptureFixture[str]) -> None:
    emit(_row(), as_json=False)
    out = capsys.readouterr().out
    (line,) = [line for line in out.splitlines() if line.startswith("mean_best_loss ")]
    assert line.endswith(": -7.5")
    assert "trace" not in out
    emit([1.0 / 3.0], as_json=False)
    assert capsys.readouterr().out.strip() == "0.3333333333"
