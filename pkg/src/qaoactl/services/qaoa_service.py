from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from qaoactl.core.errors import ReportIOError
from qaoactl.core.logging import get_logger
from qaoactl.core.models import PERIODIC_BOX, AngleBox, OptimizerSettings
from qaoactl.core.paths import ensure_parent
from qaoactl.optimize.descent import DescentResult, gradient_descent, lbfgs
from qaoactl.optimize.warmstart import MHConfig, TracePoint, warm_started_qaoa
from qaoactl.problems.graph import derive_seed
from qaoactl.problems.ising import brute_force, load_model
from qaoactl.sim.analytic import AnalyticContext, f1, f1_grid, grad_f1, grid_axes
from qaoactl.sim.loss import LossMode, loss_provider
from qaoactl.sim.params import ParamPoint, sample_point
from qaoactl.sim.statevector import ansatz, solution_probability

logger = get_logger(__name__)


def _write_csv(path: Path, header: list[str], rows: list[list[object]]) -> None:
    try:
        ensure_parent(path)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise ReportIOError(f"Cannot write {path}: {exc}") from exc


def evaluate_f1(model_path: Path, gamma: float, beta: float) -> dict[str, object]:
    context = AnalyticContext.from_model(load_model(model_path))
    dgamma, dbeta = grad_f1(context, gamma, beta)
    return {"gamma": gamma, "beta": beta, "f1": f1(context, gamma, beta), "grad": [dgamma, dbeta]}


def f1_landscape(model_path: Path, n_gamma: int, n_beta: int, out: Path) -> dict[str, object]:
    """Write F_1 over the [0, 2pi) x [0, pi) grid as long-form CSV (gamma, beta, f1)."""
    context = AnalyticContext.from_model(load_model(model_path))
    gammas, betas = grid_axes(n_gamma, n_beta)
    values = f1_grid(context, gammas, betas)
    rows: list[list[object]] = [
        [repr(float(g)), repr(float(b)), repr(float(values[i, j]))]
        for i, g in enumerate(gammas)
        for j, b in enumerate(betas)
    ]
    _write_csv(out, ["gamma", "beta", "f1"], rows)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return {
        "path": str(out),
        "points": len(rows),
        "minimum": {"gamma": float(gammas[i]), "beta": float(betas[j]), "f1": float(values[i, j])},
    }


def _resolve_mode(depth: int, mode: LossMode | None, uniform: bool) -> LossMode:
    if mode is not None:
        return mode
    return "analytic" if depth == 1 and uniform else "simulated"


def run_qaoa(
    model_path: Path,
    depth: int,
    n_inits: int,
    seed: int,
    optimizer: OptimizerSettings,
    box: AngleBox = PERIODIC_BOX,
    mode: LossMode | None = None,
) -> dict[str, object]:
    """Multi-start standard QAOA; reports the best run and its correct-solution probability."""
    model = load_model(model_path)
    loss = loss_provider(model, depth, _resolve_mode(depth, mode, model.is_uniform_coupling()))
    rng = np.random.default_rng(derive_seed(seed, depth))
    bounds = (box.gamma_low, box.gamma_high, box.beta_low, box.beta_high)

    best: DescentResult | None = None
    finals = []
    for _ in range(n_inits):
        theta0 = sample_point(rng, depth, bounds)
        if optimizer.method == "lbfgs":
            result = lbfgs(loss, theta0, optimizer.iters)
        else:
            result = gradient_descent(loss, theta0, optimizer.eta, optimizer.iters)
        finals.append(result.loss)
        if best is None or result.loss < best.loss:
            best = result
    assert best is not None

    minimum, ground = brute_force(model)
    probability = solution_probability(ansatz(model, best.params), ground)
    wrapped = best.params.wrapped()
    return {
        "depth": depth,
        "mode": loss.mode,
        "loss": best.loss,
        "gammas": list(wrapped.gammas),
        "betas": list(wrapped.betas),
        "exact_minimum": minimum,
        "probability": probability,
        "final_losses": finals,
    }


def run_warmstart(
    model_path: Path,
    depth: int,
    mh: MHConfig | None,
    eta: float,
    iters: int,
    seed: int,
    theta0: ParamPoint | None = None,
    trace_path: Path | None = None,
    mode: LossMode | None = None,
) -> dict[str, object]:
    model = load_model(model_path)
    if theta0 is None:
        rng = np.random.default_rng(derive_seed(seed, depth, 4))
        box = PERIODIC_BOX
        theta0 = sample_point(rng, depth, (box.gamma_low, box.gamma_high, box.beta_low, box.beta_high))
    result = warm_started_qaoa(model, depth, theta0, mh, eta, iters, mode)
    if trace_path is not None:
        _write_csv(trace_path, ["epoch", "phase", "loss", "accepted"], [_trace_row(p) for p in result.trace])

    wrapped = result.params.wrapped()
    summary: dict[str, object] = {
        "depth": depth,
        "loss": result.loss,
        "gammas": list(wrapped.gammas),
        "betas": list(wrapped.betas),
        "initial": theta0.as_vector().tolist(),
        "epochs": len(result.trace),
    }
    if result.chain is not None:
        summary["mh_best_loss"] = result.chain.best_loss
        summary["acceptance_ratio"] = result.chain.acceptance_ratio
    if trace_path is not None:
        summary["trace"] = str(trace_path)
    return summary


def _trace_row(point: TracePoint) -> list[object]:
    accepted = "" if point.accepted is None else str(point.accepted).lower()
    return [point.epoch, point.phase, repr(point.loss), accepted]
