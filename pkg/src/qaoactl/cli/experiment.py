from __future__ import annotations

from argparse import Namespace
from pathlib import Path

from pydantic import ValidationError

from qaoactl.cli.output import emit
from qaoactl.core.config import default_experiment_config, get_settings, load_experiment_config
from qaoactl.core.errors import ConfigError
from qaoactl.core.models import ExperimentConfig
from qaoactl.services.experiment_service import run_experiment
from qaoactl.services.report_service import emit_report, local_minima_table


def _config(args: Namespace) -> ExperimentConfig:
    cfg = load_experiment_config(Path(args.config), args.kind) if args.config else default_experiment_config(args.kind)
    overrides: dict[str, object] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    workers = args.workers if args.workers is not None else get_settings().workers
    if workers != cfg.workers:
        overrides["workers"] = workers
    if not overrides:
        return cfg
    try:
        return ExperimentConfig.model_validate({**cfg.model_dump(), **overrides})
    except ValidationError as exc:
        raise ConfigError(f"Invalid command-line overrides: {exc}") from exc


def run(args: Namespace) -> int:
    cfg = _config(args)
    report = run_experiment(cfg)
    out_dir = Path(args.out) if args.out else get_settings().output_dir / cfg.kind
    json_path = emit_report(report, "json", out_dir / "report.json")
    csv_path = emit_report(report, "csv", out_dir / "runs.csv")

    summary: dict[str, object] = {
        "kind": cfg.kind,
        "cases": len(report.cases),
        "report": str(json_path),
        "runs": str(csv_path),
    }
    if cfg.kind == "local-minima":
        summary["table"] = local_minima_table(report)
    else:
        summary["aggregates"] = [row for row in report.aggregates if row.case_id is None]
    emit(summary, args.json)
    return 0
