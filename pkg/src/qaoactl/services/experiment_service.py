"""
Experiment drivers: the MWVC depth sweep, the MVC warm-start comparison and the local-minima
census. Every case is independent and fully determined by (config, master seed); with
workers > 1 cases run in a process pool and are reassembled in case order.
"""

from __future__ import annotations

from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor

from qaoactl.core.errors import BudgetError, ConfigError
from qaoactl.core.logging import get_logger
from qaoactl.core.models import (
    CaseRecord,
    DepthResult,
    ExperimentConfig,
    ExperimentReport,
    InitRecord,
    RunResult,
)
from qaoactl.optimize.descent import DescentResult, LossAndGrad, gradient_descent, lbfgs
from qaoactl.optimize.warmstart import MHConfig, warm_start
from qaoactl.problems.graph import derive_seed
from qaoactl.services.instance_service import Instance, build_instance, initial_points
from qaoactl.services.report_service import aggregate
from qaoactl.sim.analytic import AnalyticContext, grid_minimum
from qaoactl.sim.loss import loss_provider
from qaoactl.sim.params import ParamPoint
from qaoactl.sim.statevector import ansatz, solution_probability

logger = get_logger(__name__)

SIZE_LIMITS = {"mwvc": 14, "mvc-warmstart": 12, "local-minima": 12}

Task = tuple[ExperimentConfig, int, float, int]


def _check_budget(cfg: ExperimentConfig) -> None:
    limit = SIZE_LIMITS[cfg.kind]
    too_large = [n for n in cfg.sizes if n > limit]
    if too_large:
        raise BudgetError(f"{cfg.kind} experiments support n <= {limit}, got sizes {too_large}")


def _tasks(cfg: ExperimentConfig) -> list[Task]:
    tasks: list[Task] = []
    case_id = 0
    for edge_prob in cfg.sweep_edge_probs():
        for size in cfg.sizes:
            for _ in range(cfg.cases_per_size):
                tasks.append((cfg, size, edge_prob, case_id))
                case_id += 1
    return tasks


def _run_cases(cfg: ExperimentConfig, worker: Callable[[Task], CaseRecord]) -> list[CaseRecord]:
    tasks = _tasks(cfg)
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(worker, tasks))
    else:
        records = [worker(task) for task in tasks]
    return sorted(records, key=lambda record: record.case_id)


def _loss(instance: Instance, depth: int) -> LossAndGrad:
    mode = "analytic" if depth == 1 else "simulated"
    return loss_provider(instance.model, depth, mode)


def _probability(instance: Instance, params: ParamPoint) -> float:
    return solution_probability(ansatz(instance.model, params), instance.ground_states)


def _optimize(cfg: ExperimentConfig, loss: LossAndGrad, theta0: ParamPoint) -> DescentResult:
    settings = cfg.optimizer
    if settings.method == "lbfgs":
        return lbfgs(loss, theta0, settings.iters)
    return gradient_descent(loss, theta0, settings.eta, settings.iters)


def _record(instance: Instance, **extra: object) -> CaseRecord:
    return CaseRecord(
        case_id=instance.case_id,
        size=instance.size,
        edge_prob=instance.edge_prob,
        seed=instance.seed,
        n_edges=instance.graph.edge_count,
        a=instance.a,
        b=instance.b,
        exact_optimum=instance.exact_optimum,
        ground_states=len(instance.ground_states),
        **extra,  # type: ignore[arg-type]
    )


def _run(method: str, instance: Instance, result: DescentResult, trace: list[float]) -> RunResult:
    return RunResult(
        method=method,  # type: ignore[arg-type]
        final=result.params.as_vector().tolist(),
        final_loss=result.loss,
        probability=_probability(instance, result.params),
        trace=trace,
    )


def _depth_sweep_case(task: Task) -> CaseRecord:
    cfg, size, edge_prob, case_id = task
    instance = build_instance(cfg, size, edge_prob, case_id)
    inits: list[InitRecord] = []
    depth_results: list[DepthResult] = []
    previous_best: ParamPoint | None = None

    for depth in sorted(cfg.depths):
        loss = _loss(instance, depth)
        starts = initial_points(instance, depth, cfg.n_inits, cfg.init_domain)
        if previous_best is not None:
            # nested start: the previous depth's optimum plus an identity layer
            starts[-1] = previous_best.extended()

        best: RunResult | None = None
        best_params = starts[0]
        for index, theta0 in enumerate(starts):
            result = _optimize(cfg, loss, theta0)
            run = _run("qaoa", instance, result, result.trace)
            inits.append(InitRecord(depth=depth, init_index=index, initial=theta0.as_vector().tolist(), runs=[run]))
            if best is None or run.final_loss < best.final_loss:
                best, best_params = run, result.params

        assert best is not None
        depth_results.append(DepthResult(depth=depth, best_loss=best.final_loss, probability=best.probability))
        previous_best = best_params
        logger.info(
            f"Case {case_id} depth {depth}: best_loss={best.final_loss:.6f} probability={best.probability:.4f}"
        )

    return _record(instance, depth_results=depth_results, inits=inits)


def _warmstart_case(task: Task) -> CaseRecord:
    cfg, size, edge_prob, case_id = task
    instance = build_instance(cfg, size, edge_prob, case_id)
    depth = cfg.depths[0]
    loss = _loss(instance, depth)
    eta, iters = cfg.optimizer.eta, cfg.optimizer.iters
    # without a chain the warm run is the cold descent itself
    closing_eta = eta if cfg.mh.descent_eta is None or cfg.mh.t_max == 0 else cfg.mh.descent_eta

    inits: list[InitRecord] = []
    for index, theta0 in enumerate(initial_points(instance, depth, cfg.n_inits, cfg.init_domain)):
        cold = gradient_descent(loss, theta0, eta, iters)
        mh = MHConfig.from_settings(cfg.mh, derive_seed(instance.seed, depth, index, 3))
        warm = warm_start(loss, theta0, mh, closing_eta, iters)
        runs = [
            _run("cold", instance, cold, cold.trace),
            _run("warm", instance, DescentResult(warm.params, warm.loss), warm.losses()),
        ]
        inits.append(InitRecord(depth=depth, init_index=index, initial=theta0.as_vector().tolist(), runs=runs))

    grid = _grid_reference(cfg, instance, depth)
    logger.info(f"Case {case_id}: warm-start comparison over {len(inits)} initial points done")
    return _record(instance, grid_minimum=grid, inits=inits)


def _local_minima_case(task: Task) -> CaseRecord:
    cfg, size, edge_prob, case_id = task
    instance = build_instance(cfg, size, edge_prob, case_id)
    depth = cfg.depths[0]
    loss = _loss(instance, depth)

    inits: list[InitRecord] = []
    for index, theta0 in enumerate(initial_points(instance, depth, cfg.n_inits, cfg.init_domain)):
        result = gradient_descent(loss, theta0, cfg.optimizer.eta, cfg.optimizer.iters)
        run = _run("cold", instance, result, result.trace)
        inits.append(InitRecord(depth=depth, init_index=index, initial=theta0.as_vector().tolist(), runs=[run]))

    finals = [record.runs[0].final_loss for record in inits]
    proxy = min(finals)
    stuck = sum(1 for value in finals if value > proxy + cfg.local_minimum_tol)
    fraction = stuck / len(finals)
    logger.info(f"Case {case_id} (p={edge_prob}): local-minimum fraction {fraction:.2f}")
    return _record(
        instance,
        grid_minimum=_grid_reference(cfg, instance, depth),
        local_minimum_fraction=fraction,
        inits=inits,
    )


def _grid_reference(cfg: ExperimentConfig, instance: Instance, depth: int) -> float | None:
    if depth != 1 or not instance.model.is_uniform_coupling():
        return None
    context = AnalyticContext.from_model(instance.model)
    return grid_minimum(context, cfg.grid.n_gamma, cfg.grid.n_beta, polish=True).value


def _report(cfg: ExperimentConfig, cases: list[CaseRecord]) -> ExperimentReport:
    report = ExperimentReport(kind=cfg.kind, config=cfg, cases=cases)
    return report.model_copy(update={"aggregates": aggregate(report)})


def _expect(cfg: ExperimentConfig, kind: str) -> None:
    if cfg.kind != kind:
        raise ConfigError(f"Expected a '{kind}' experiment config, got '{cfg.kind}'")


def run_mwvc_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Depth sweep of standard QAOA over random instances; default problem is MWVC."""
    _expect(cfg, "mwvc")
    _check_budget(cfg)
    logger.info(f"Depth sweep: sizes={cfg.sizes} depths={cfg.depths} cases/size={cfg.cases_per_size}")
    return _report(cfg, _run_cases(cfg, _depth_sweep_case))


def run_mvc_warmstart_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    _expect(cfg, "mvc-warmstart")
    _check_budget(cfg)
    logger.info(f"Warm-start comparison: sizes={cfg.sizes} p={cfg.edge_prob} cases={cfg.cases_per_size}")
    return _report(cfg, _run_cases(cfg, _warmstart_case))


def estimate_local_minima_probability(cfg: ExperimentConfig) -> ExperimentReport:
    """Fraction of cold-start descents ending above the best-of-inits proxy, per edge probability."""
    _expect(cfg, "local-minima")
    _check_budget(cfg)
    logger.info(f"Local-minima census: edge_probs={cfg.sweep_edge_probs()} cases={cfg.cases_per_size}")
    return _report(cfg, _run_cases(cfg, _local_minima_case))


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.kind == "mwvc":
        return run_mwvc_experiment(cfg)
    if cfg.kind == "mvc-warmstart":
        return run_mvc_warmstart_experiment(cfg)
    return estimate_local_minima_probability(cfg)
