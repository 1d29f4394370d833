from __future__ import annotations

from argparse import Namespace
from pathlib import Path

from qaoactl.cli.output import emit
from qaoactl.services.problem_service import build_ising, certify, generate_graph, solve_exactly


def _weight_range(raw: str | None) -> tuple[float, float] | None:
    if raw is None:
        return None
    lo, _, hi = raw.partition(",")
    return float(lo), float(hi)


def run_gen_graph(args: Namespace) -> int:
    emit(generate_graph(args.n, args.p, args.seed, Path(args.out), _weight_range(args.weights)), args.json)
    return 0


def run_build_ising(args: Namespace) -> int:
    summary = build_ising(
        Path(args.graph),
        args.problem,
        Path(args.out),
        a=args.a,
        b=args.b,
        margin=args.margin,
        part=args.part,
        strict=not args.no_strict,
    )
    emit(summary, args.json)
    return 0


def run_brute_force(args: Namespace) -> int:
    emit(solve_exactly(Path(args.model), args.problem), args.json)
    return 0


def run_verify(args: Namespace) -> int:
    result = certify(Path(args.graph), args.problem, args.a, args.b)
    emit(result, args.json)
    certificate = result["certificate"]
    assert isinstance(certificate, dict)
    return 0 if certificate["holds"] else 4
