from __future__ import annotations

from argparse import Namespace
from pathlib import Path

from qaoactl.cli.output import emit
from qaoactl.core.errors import InvalidInputError
from qaoactl.core.models import OptimizerSettings
from qaoactl.optimize.warmstart import MHConfig
from qaoactl.services.qaoa_service import evaluate_f1, f1_landscape, run_qaoa, run_warmstart
from qaoactl.sim.params import ParamPoint


def _grid_shape(raw: str) -> tuple[int, int]:
    try:
        n_gamma, n_beta = (int(part) for part in raw.lower().split("x"))
    except ValueError as exc:
        raise InvalidInputError(f"--grid expects GxH (for example 200x100), got {raw!r}") from exc
    return n_gamma, n_beta


def run_f1_eval(args: Namespace) -> int:
    if args.grid:
        if not args.out:
            raise InvalidInputError("--grid needs --out for the landscape CSV")
        n_gamma, n_beta = _grid_shape(args.grid)
        emit(f1_landscape(Path(args.model), n_gamma, n_beta, Path(args.out)), args.json)
        return 0
    if args.gamma is None or args.beta is None:
        raise InvalidInputError("f1-eval needs --gamma and --beta, or --grid with --out")
    emit(evaluate_f1(Path(args.model), args.gamma, args.beta), args.json)
    return 0


def run_qaoa_run(args: Namespace) -> int:
    optimizer = OptimizerSettings(method=args.optimizer, eta=args.eta, iters=args.iters)
    emit(run_qaoa(Path(args.model), args.depth, args.n_inits, args.seed, optimizer, mode=args.mode), args.json)
    return 0


def run_warmstart_run(args: Namespace) -> int:
    mh = None
    if args.tmax > 0:
        mh = MHConfig(args.tmax, args.alpha, args.eta, args.xi, args.seed, args.noise_mode)
    theta0 = None
    if args.gamma0 is not None or args.beta0 is not None:
        if args.gamma0 is None or args.beta0 is None or len(args.gamma0) != len(args.beta0):
            raise InvalidInputError("--gamma0 and --beta0 must be given together with equal lengths")
        theta0 = ParamPoint(tuple(args.gamma0), tuple(args.beta0))
        if theta0.depth != args.depth:
            raise InvalidInputError(f"Initial point has depth {theta0.depth}, --depth is {args.depth}")
    summary = run_warmstart(
        Path(args.model),
        args.depth,
        mh,
        args.descent_eta if args.descent_eta is not None else args.eta,
        args.iters,
        args.seed,
        theta0=theta0,
        trace_path=Path(args.trace) if args.trace else None,
        mode=args.mode,
    )
    emit(summary, args.json)
    return 0
