"""Command output on stdout: JSON with --json, otherwise aligned ``key: value`` lines."""

from __future__ import annotations

import json
from typing import Any

from pydantic import BaseModel

# per-epoch series belong in report.json and runs.csv, not in summaries
TRACE_FIELDS = {"trace", "mean_trace", "var_trace"}


def emit(data: Any, as_json: bool) -> None:
    payload = _plain(data)
    if as_json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
        return
    if isinstance(payload, list):
        for row in payload:
            print(_format_row(row))
        return
    if isinstance(payload, dict):
        width = max((len(key) for key in payload), default=0)
        for key, value in payload.items():
            if _is_table(value):
                print(f"{key}:")
                for row in value:
                    print(f"  {_format_row(row)}")
            else:
                print(f"{key:<{width}}: {_format_value(value)}")
        return
    print(payload)


def _plain(data: Any) -> Any:
    """Report models become JSON-ready dicts without their traces."""
    if isinstance(data, BaseModel):
        return _plain(data.model_dump(mode="json", exclude=TRACE_FIELDS & set(type(data).model_fields)))
    if isinstance(data, dict):
        return {key: _plain(value) for key, value in data.items()}
    if isinstance(data, list | tuple):
        return [_plain(item) for item in data]
    return data


def _is_table(value: object) -> bool:
    return isinstance(value, list) and bool(value) and all(isinstance(row, dict) for row in value)


def _format_value(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, list) and value and all(isinstance(v, float) for v in value):
        return "[" + ", ".join(f"{v:.6g}" for v in value) + "]"
    if isinstance(value, dict):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def _format_row(row: object) -> str:
    if not isinstance(row, dict):
        return _format_value(row)
    return " ".join(f"{key}={_format_value(value)}" for key, value in row.items())
