"""Desk-scale end-to-end properties. Run with `pytest -m slow`."""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import pytest

from qaoactl.core.config import default_experiment_config
from qaoactl.core.models import ExperimentReport, OptimizerSettings, ProblemKind
from qaoactl.problems.compilers import build_problem, decode, mvc_pair, mwvc_coefficients
from qaoactl.problems.graph import Graph, assign_random_weights, gen_erdos_renyi
from qaoactl.problems.ising import IsingModel, brute_force
from qaoactl.problems.oracles import optimal_sets
from qaoactl.problems.spectrum import spectrum_analysis, verify_theorem1
from qaoactl.services.experiment_service import (
    estimate_local_minima_probability,
    run_mvc_warmstart_experiment,
    run_mwvc_experiment,
)
from qaoactl.sim.analytic import AnalyticContext, f1, grad_f1
from qaoactl.sim.params import ParamPoint
from qaoactl.sim.statevector import ansatz, expectation

pytestmark = pytest.mark.slow


def _all_connected_graphs(max_n: int) -> list[Graph]:
    """One representative per isomorphism class of connected graphs on 1..max_n vertices."""
    return [
        Graph.from_networkx(structure)
        for structure in nx.graph_atlas_g()
        if 1 <= structure.number_of_nodes() <= max_n and nx.is_connected(structure)
    ]


def _compiled(problem: ProblemKind, g: Graph, seed: int) -> tuple[Graph, IsingModel]:
    if problem == "mwvc":
        g = assign_random_weights(g, 0.0, 3.0, seed)
        a, b = mwvc_coefficients(g, 0.5, 0.1)
    else:
        a, b = 2.0, 1.0
    return g, build_problem(problem, g, a, b)


def test_closed_form_matches_simulation() -> None:
    rng = np.random.default_rng(101)
    for index in range(100):
        n = int(rng.integers(2, 11))
        problem: ProblemKind = ("mvc", "mwvc", "mis")[index % 3]
        _, model = _compiled(problem, gen_erdos_renyi(n, 0.5, index), index)
        ctx = AnalyticContext.from_model(model)
        for gamma, beta in rng.uniform(-np.pi, np.pi, (20, 2)):
            simulated = expectation(ansatz(model, ParamPoint.of(gamma, beta)), model)
            assert abs(f1(ctx, gamma, beta) - simulated) <= 1e-9


def test_encodings_reproduce_combinatorial_optima() -> None:
    connected = _all_connected_graphs(6)
    assert len(connected) == 143
    graphs = connected + [gen_erdos_renyi(n, 0.5, 500 + n * 40 + k) for n in range(1, 9) for k in range(25)]
    for index, graph in enumerate(graphs):
        problems: tuple[ProblemKind, ...] = ("mvc", "mwvc", "mis")
        for problem in problems:
            g, model = _compiled(problem, graph, index)
            _, ground = brute_force(model)
            assert {decode(problem, z) for z in ground} == set(optimal_sets(problem, g))


@pytest.fixture(scope="module")
def spectrum_graphs() -> list[Graph]:
    rng = np.random.default_rng(7)
    return [gen_erdos_renyi(int(rng.integers(2, 9)), 0.5, 900 + k) for k in range(100)]


def test_vertex_cover_spectrum_shape(spectrum_graphs: list[Graph]) -> None:
    for g in spectrum_graphs:
        report = spectrum_analysis(*mvc_pair(g))
        for i in range(report.o):
            assert report.e[i] - report.e[i + 1] >= 1 - 1e-9
            assert report.levels[report.o] - report.levels[i] == pytest.approx(report.o - i)


def test_sufficient_condition_sweep(spectrum_graphs: list[Graph]) -> None:
    failures = 0
    for g in spectrum_graphs:
        h_a, h_b = mvc_pair(g)
        report = spectrum_analysis(h_a, h_b)
        for b in (0.5, 1.0, 2.0):
            threshold = b * (report.feasible_threshold or 0.0)
            for a in (threshold * (1 + 1e-6) + 1e-9, 1.5 * threshold + 0.1, 4 * threshold + 1):
                assert verify_theorem1(h_a, h_b, a, b).holds
        certificate = verify_theorem1(h_a, h_b, 0.3, 1.0)
        if not certificate.holds:
            failures += 1
            assert certificate.violations
    assert failures > 0


def test_gradient_matches_finite_differences() -> None:
    rng = np.random.default_rng(55)
    step = 1e-6
    worst = 0.0
    for index in range(100):
        problem: ProblemKind = ("mvc", "mwvc", "mis")[index % 3]
        _, model = _compiled(problem, gen_erdos_renyi(int(rng.integers(2, 9)), 0.5, 300 + index), index)
        ctx = AnalyticContext.from_model(model)
        gamma, beta = rng.uniform(-np.pi, np.pi, 2)
        dgamma, dbeta = grad_f1(ctx, gamma, beta)
        fd_gamma = (f1(ctx, gamma + step, beta) - f1(ctx, gamma - step, beta)) / (2 * step)
        fd_beta = (f1(ctx, gamma, beta + step) - f1(ctx, gamma, beta - step)) / (2 * step)
        worst = max(worst, abs(dgamma - fd_gamma), abs(dbeta - fd_beta))
    assert worst <= 1e-6


def _warmstart_report() -> ExperimentReport:
    cfg = default_experiment_config("mvc-warmstart", sizes=[8], cases_per_size=10, n_inits=10, seed=2024)
    return run_mvc_warmstart_experiment(cfg)


def _depth_report() -> ExperimentReport:
    cfg = default_experiment_config(
        "mwvc",
        sizes=[6],
        cases_per_size=5,
        depths=[1, 2, 3],
        n_inits=20,
        optimizer=OptimizerSettings(method="lbfgs", iters=200),
        seed=2024,
    )
    return run_mwvc_experiment(cfg)


def _census_report() -> ExperimentReport:
    cfg = default_experiment_config("local-minima", edge_probs=[0.6], sizes=[10], cases_per_size=20, n_inits=20, seed=2024)
    return estimate_local_minima_probability(cfg)


@pytest.fixture(scope="module")
def warmstart_report() -> ExperimentReport:
    return _warmstart_report()


@pytest.fixture(scope="module")
def depth_report() -> ExperimentReport:
    return _depth_report()


@pytest.fixture(scope="module")
def census_report() -> ExperimentReport:
    return _census_report()


def test_warm_start_beats_cold_start(warmstart_report: ExperimentReport) -> None:
    warm_hits = cold_misses = pairs = 0
    for case in warmstart_report.cases:
        assert case.grid_minimum is not None
        for init in case.inits:
            pairs += 1
            warm_hits += abs(init.run("warm").final_loss - case.grid_minimum) <= 1e-2
            cold_misses += abs(init.run("cold").final_loss - case.grid_minimum) > 1e-2
    assert warm_hits >= 0.9 * pairs
    assert cold_misses >= 0.2 * pairs


def test_depth_trend(depth_report: ExperimentReport) -> None:
    rows = sorted(depth_report.aggregates, key=lambda row: row.depth)
    for shallow, deep in itertools.pairwise(rows):
        assert deep.mean_best_loss <= shallow.mean_best_loss + 1e-6
        assert shallow.mean_probability is not None and deep.mean_probability is not None
        assert deep.mean_probability >= shallow.mean_probability - 0.02


def test_local_minima_are_common_on_dense_graphs(census_report: ExperimentReport) -> None:
    (row,) = [row for row in census_report.aggregates if row.case_id is None]
    assert row.mean_local_minimum_fraction is not None
    assert row.mean_local_minimum_fraction > 0.4


def test_reports_are_reproducible(
    warmstart_report: ExperimentReport, depth_report: ExperimentReport, census_report: ExperimentReport
) -> None:
    assert _warmstart_report().model_dump_json() == warmstart_report.model_dump_json()
    assert _depth_report().model_dump_json() == depth_report.model_dump_json()
    assert _census_report().model_dump_json() == census_report.model_dump_json()
