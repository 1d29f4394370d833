from __future__ import annotations

import argparse
import sys

from pydantic import ValidationError

from qaoactl.cli import experiment, problems, qaoa
from qaoactl.core.errors import (
    BudgetError,
    ConfigError,
    ConsistencyError,
    InvalidInputError,
    QaoactlError,
    ReportIOError,
)
from qaoactl.core.logging import setup_logging

PROBLEM_CHOICES = ["mvc", "mwvc", "mis"]
EXIT_CODES: list[tuple[type[Exception], int]] = [
    (ConfigError, 2),
    (InvalidInputError, 2),
    (ReportIOError, 2),
    (BudgetError, 3),
    (ConsistencyError, 4),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaoactl")
    parser.add_argument("--log-level")
    subparsers = parser.add_subparsers(dest="command")

    graph_cmd = subparsers.add_parser("gen-graph")
    graph_cmd.add_argument("--n", type=int, required=True)
    graph_cmd.add_argument("--p", type=float, required=True)
    graph_cmd.add_argument("--seed", type=int, default=0)
    graph_cmd.add_argument("--weights", help="lo,hi for uniform vertex weights")
    graph_cmd.add_argument("--out", required=True)
    graph_cmd.add_argument("--json", action="store_true")

    ising_cmd = subparsers.add_parser("build-ising")
    ising_cmd.add_argument("--graph", required=True)
    ising_cmd.add_argument("--problem", choices=PROBLEM_CHOICES, required=True)
    ising_cmd.add_argument("--a", type=float, help="omit to use a = b * sum(weights) + margin")
    ising_cmd.add_argument("--b", type=float, default=1.0)
    ising_cmd.add_argument("--margin", type=float, default=0.1)
    ising_cmd.add_argument("--part", choices=["combined", "constraint", "objective"], default="combined")
    ising_cmd.add_argument("--no-strict", action="store_true")
    ising_cmd.add_argument("--out", required=True)
    ising_cmd.add_argument("--json", action="store_true")

    brute_cmd = subparsers.add_parser("brute-force")
    brute_cmd.add_argument("--model", required=True)
    brute_cmd.add_argument("--problem", choices=PROBLEM_CHOICES)
    brute_cmd.add_argument("--json", action="store_true")

    verify_cmd = subparsers.add_parser("verify-theorem1")
    verify_cmd.add_argument("--graph", required=True)
    verify_cmd.add_argument("--problem", choices=PROBLEM_CHOICES, required=True)
    verify_cmd.add_argument("--a", type=float, required=True)
    verify_cmd.add_argument("--b", type=float, required=True)
    verify_cmd.add_argument("--json", action="store_true")

    f1_cmd = subparsers.add_parser("f1-eval")
    f1_cmd.add_argument("--model", required=True)
    f1_cmd.add_argument("--gamma", type=float)
    f1_cmd.add_argument("--beta", type=float)
    f1_cmd.add_argument("--grid", help="GxH landscape over [0,2pi) x [0,pi)")
    f1_cmd.add_argument("--out")
    f1_cmd.add_argument("--json", action="store_true")

    qaoa_cmd = subparsers.add_parser("qaoa-run")
    qaoa_cmd.add_argument("--model", required=True)
    qaoa_cmd.add_argument("--depth", type=int, default=1)
    qaoa_cmd.add_argument("--n-inits", type=int, default=20)
    qaoa_cmd.add_argument("--optimizer", choices=["descent", "lbfgs"], default="lbfgs")
    qaoa_cmd.add_argument("--eta", type=float, default=0.1)
    qaoa_cmd.add_argument("--iters", type=int, default=200)
    qaoa_cmd.add_argument("--mode", choices=["analytic", "simulated"])
    qaoa_cmd.add_argument("--seed", type=int, default=0)
    qaoa_cmd.add_argument("--json", action="store_true")

    warm_cmd = subparsers.add_parser("warmstart-run")
    warm_cmd.add_argument("--model", required=True)
    warm_cmd.add_argument("--depth", type=int, default=1)
    warm_cmd.add_argument("--tmax", type=int, default=600)
    warm_cmd.add_argument("--alpha", type=float, default=0.5)
    warm_cmd.add_argument("--xi", type=float, default=0.4)
    warm_cmd.add_argument("--eta", type=float, default=0.1)
    warm_cmd.add_argument("--descent-eta", type=float)
    warm_cmd.add_argument("--iters", type=int, default=200)
    warm_cmd.add_argument("--noise-mode", choices=["per-component", "shared-scalar"], default="per-component")
    warm_cmd.add_argument("--gamma0", type=float, nargs="+")
    warm_cmd.add_argument("--beta0", type=float, nargs="+")
    warm_cmd.add_argument("--mode", choices=["analytic", "simulated"])
    warm_cmd.add_argument("--seed", type=int, default=0)
    warm_cmd.add_argument("--trace")
    warm_cmd.add_argument("--json", action="store_true")

    exp_cmd = subparsers.add_parser("experiment")
    exp_cmd.add_argument("kind", choices=["mwvc", "mvc-warmstart", "local-minima"])
    exp_cmd.add_argument("--config")
    exp_cmd.add_argument("--out", help="directory for report.json and runs.csv")
    exp_cmd.add_argument("--seed", type=int)
    exp_cmd.add_argument("--workers", type=int)
    exp_cmd.add_argument("--json", action="store_true")

    return parser


def _dispatch(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.command == "gen-graph":
        return problems.run_gen_graph(args)
    if args.command == "build-ising":
        return problems.run_build_ising(args)
    if args.command == "brute-force":
        return problems.run_brute_force(args)
    if args.command == "verify-theorem1":
        return problems.run_verify(args)
    if args.command == "f1-eval":
        return qaoa.run_f1_eval(args)
    if args.command == "qaoa-run":
        return qaoa.run_qaoa_run(args)
    if args.command == "warmstart-run":
        return qaoa.run_warmstart_run(args)
    if args.command == "experiment":
        return experiment.run(args)
    parser.print_help()
    return 2


def exit_code(exc: Exception) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(exc, error_type):
            return code
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    try:
        setup_logging(args.log_level)
        return _dispatch(parser, args)
    except QaoactlError as exc:
        print(f"qaoactl: {exc}", file=sys.stderr)
        return exit_code(exc)
    except ValidationError as exc:
        print(f"qaoactl: invalid settings: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
