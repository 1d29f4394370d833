"""
Report aggregation and serialization.

JSON holds the whole ExperimentReport (config, per-case records, aggregates) and reads back
into an identical model. CSV holds one row per (case, depth, initial point) with one
loss/probability column pair per optimizer method; see README for both schemas.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from collections.abc import Iterable
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import ValidationError

from qaoactl.core.errors import ConsistencyError, InvalidInputError, ReportIOError
from qaoactl.core.models import AggregateRecord, CaseRecord, ExperimentKind, ExperimentReport
from qaoactl.core.paths import ensure_parent

ReportFormat = Literal["csv", "json"]

METHODS: dict[ExperimentKind, tuple[str, ...]] = {
    "mwvc": ("qaoa",),
    "mvc-warmstart": ("cold", "warm"),
    "local-minima": ("cold",),
}
CSV_PREFIX = ("case_id", "size", "edge_prob", "seed", "depth", "init_index", "initial")


def _mean_var(values: Iterable[float]) -> tuple[float, float]:
    array = np.fromiter(values, dtype=np.float64)
    return float(array.mean()), float(array.var())


def _optional_mean_var(values: list[float | None]) -> tuple[float | None, float | None]:
    present = [v for v in values if v is not None]
    if not present:
        return None, None
    return _mean_var(present)


def _trajectory(traces: list[list[float]]) -> tuple[list[float], list[float]]:
    if not traces or len({len(t) for t in traces}) != 1:
        return [], []
    stacked = np.array(traces, dtype=np.float64)
    return stacked.mean(axis=0).tolist(), stacked.var(axis=0).tolist()


def _depth_sweep_aggregates(cases: list[CaseRecord]) -> list[AggregateRecord]:
    groups: dict[tuple[int, float, int], list[tuple[float, float | None]]] = defaultdict(list)
    for case in cases:
        for result in case.depth_results:
            groups[(case.size, case.edge_prob, result.depth)].append((result.best_loss, result.probability))
    rows = []
    for (size, edge_prob, depth), items in sorted(groups.items()):
        mean_loss, var_loss = _mean_var(loss for loss, _ in items)
        mean_prob, var_prob = _optional_mean_var([prob for _, prob in items])
        rows.append(
            AggregateRecord(
                size=size,
                edge_prob=edge_prob,
                depth=depth,
                method="qaoa",
                cases=len(items),
                mean_best_loss=mean_loss,
                var_best_loss=var_loss,
                mean_probability=mean_prob,
                var_probability=var_prob,
            )
        )
    return rows


def _warmstart_aggregates(cases: list[CaseRecord], methods: tuple[str, ...]) -> list[AggregateRecord]:
    """Per-case across-init trajectories, then one ensemble row per method averaging the per-case rows."""
    per_case: list[AggregateRecord] = []
    for case in cases:
        for method in methods:
            runs = [init.run(method) for init in case.inits]
            if not runs:
                continue
            mean_loss, var_loss = _mean_var(run.final_loss for run in runs)
            mean_prob, var_prob = _optional_mean_var([run.probability for run in runs])
            mean_trace, var_trace = _trajectory([run.trace for run in runs])
            per_case.append(
                AggregateRecord(
                    size=case.size,
                    edge_prob=case.edge_prob,
                    depth=case.inits[0].depth,
                    method=method,
                    case_id=case.case_id,
                    cases=1,
                    mean_best_loss=mean_loss,
                    var_best_loss=var_loss,
                    mean_probability=mean_prob,
                    var_probability=var_prob,
                    mean_local_minimum_fraction=case.local_minimum_fraction,
                    mean_trace=mean_trace,
                    var_trace=var_trace,
                )
            )

    groups: dict[tuple[int, float, int, str], list[AggregateRecord]] = defaultdict(list)
    for row in per_case:
        groups[(row.size, row.edge_prob, row.depth, row.method)].append(row)
    ensemble = []
    for (size, edge_prob, depth, method), rows in sorted(groups.items()):
        fractions = [r.mean_local_minimum_fraction for r in rows if r.mean_local_minimum_fraction is not None]
        mean_trace, _ = _trajectory([r.mean_trace for r in rows])
        var_trace, _ = _trajectory([r.var_trace for r in rows])
        ensemble.append(
            AggregateRecord(
                size=size,
                edge_prob=edge_prob,
                depth=depth,
                method=method,
                cases=len(rows),
                mean_best_loss=float(np.mean([r.mean_best_loss for r in rows])),
                var_best_loss=float(np.mean([r.var_best_loss for r in rows])),
                mean_probability=_optional_mean_var([r.mean_probability for r in rows])[0],
                var_probability=_optional_mean_var([r.var_probability for r in rows])[0],
                mean_local_minimum_fraction=float(np.mean(fractions)) if fractions else None,
                mean_trace=mean_trace,
                var_trace=var_trace,
            )
        )
    return per_case + ensemble


def aggregate(report: ExperimentReport) -> list[AggregateRecord]:
    if report.kind == "mwvc":
        return _depth_sweep_aggregates(report.cases)
    return _warmstart_aggregates(report.cases, METHODS[report.kind])


def _close(left: float | None, right: float | None) -> bool:
    if left is None or right is None:
        return left is right
    return math.isclose(left, right, rel_tol=1e-12, abs_tol=1e-12)


def check_consistency(report: ExperimentReport) -> None:
    """Raise ConsistencyError unless the stored aggregates equal a recomputation from the cases."""
    expected = aggregate(report)
    if len(expected) != len(report.aggregates):
        raise ConsistencyError(f"Report has {len(report.aggregates)} aggregate rows, expected {len(expected)}")
    for stored, fresh in zip(report.aggregates, expected, strict=True):
        scalars = ("mean_best_loss", "var_best_loss", "mean_probability", "var_probability")
        if (stored.size, stored.depth, stored.method, stored.case_id) != (
            fresh.size,
            fresh.depth,
            fresh.method,
            fresh.case_id,
        ) or not all(_close(getattr(stored, name), getattr(fresh, name)) for name in scalars):
            raise ConsistencyError(
                f"Aggregate mismatch for size={fresh.size} depth={fresh.depth} method={fresh.method}"
            )


def local_minima_table(report: ExperimentReport) -> list[dict[str, float | int | None]]:
    return [
        {
            "edge_prob": row.edge_prob,
            "size": row.size,
            "cases": row.cases,
            "local_minimum_fraction": row.mean_local_minimum_fraction,
            "mean_best_loss": row.mean_best_loss,
        }
        for row in report.aggregates
        if row.case_id is None
    ]


def csv_header(kind: ExperimentKind) -> list[str]:
    header = list(CSV_PREFIX)
    for method in METHODS[kind]:
        header += [f"{method}_final", f"{method}_loss", f"{method}_probability"]
    return header


def _vector(values: list[float]) -> str:
    return " ".join(repr(float(v)) for v in values)


def csv_rows(report: ExperimentReport) -> list[list[object]]:
    rows: list[list[object]] = []
    for case in report.cases:
        for init in case.inits:
            row: list[object] = [
                case.case_id,
                case.size,
                case.edge_prob,
                case.seed,
                init.depth,
                init.init_index,
                _vector(init.initial),
            ]
            for method in METHODS[report.kind]:
                run = init.run(method)
                probability = "" if run.probability is None else repr(run.probability)
                row += [_vector(run.final), repr(run.final_loss), probability]
            rows.append(row)
    return rows


def emit_report(report: ExperimentReport, fmt: ReportFormat, path: Path) -> Path:
    try:
        ensure_parent(path)
        if fmt == "json":
            path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        elif fmt == "csv":
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(csv_header(report.kind))
                writer.writerows(csv_rows(report))
        else:
            raise InvalidInputError(f"Unknown report format: {fmt}")
    except OSError as exc:
        raise ReportIOError(f"Cannot write report to {path}: {exc}") from exc
    return path


def load_report(path: Path, verify: bool = True) -> ExperimentReport:
    try:
        report = ExperimentReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportIOError(f"Cannot read report from {path}: {exc}") from exc
    except ValidationError as exc:
        raise ReportIOError(f"Malformed report {path}: {exc}") from exc
    if verify:
        check_consistency(report)
    return report
