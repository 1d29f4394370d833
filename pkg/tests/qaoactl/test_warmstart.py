from __future__ import annotations

import math

import numpy as np
import pytest

from qaoactl.core.errors import EvaluationError, InvalidInputError
from qaoactl.optimize.descent import gradient_descent, lbfgs
from qaoactl.optimize.warmstart import (
    MHConfig,
    accept_rate,
    log_proposal_density,
    log_target,
    propose,
    run_mh,
    warm_start,
    warm_started_qaoa,
)
from qaoactl.problems.compilers import build_mvc
from qaoactl.problems.graph import Graph
from qaoactl.sim.analytic import AnalyticContext, grid_minimum
from qaoactl.sim.loss import loss_provider
from qaoactl.sim.params import ParamPoint

TARGET = np.array([0.3, -0.2])


def quadratic(theta: ParamPoint) -> tuple[float, np.ndarray]:
    delta = theta.as_vector() - TARGET
    return float(delta @ delta), 2 * delta


def test_config_validation() -> None:
    with pytest.raises(InvalidInputError):
        MHConfig(t_max=0)
    with pytest.raises(InvalidInputError):
        MHConfig(alpha=0.0)
    with pytest.raises(InvalidInputError):
        MHConfig(xi=-0.1)


def test_log_target() -> None:
    assert log_target(0.0, 0.5) == 0.0
    assert log_target(2.0, 0.5) == -1.0
    assert math.exp(log_target(1.0, 0.5) - log_target(3.0, 0.5)) > 1


def test_noiseless_proposal_is_a_descent_step() -> None:
    theta = ParamPoint.of(1.0, -1.0)
    rng = np.random.default_rng(0)
    step = propose(theta, np.array([1.0, 2.0]), MHConfig(xi=0.0, eta=0.1), rng)
    assert step.as_vector() == pytest.approx([0.9, -1.2])
    assert propose(theta, np.array([1.0, 2.0]), MHConfig(xi=0.0, eta=0.0), rng) == theta
    with pytest.raises(InvalidInputError):
        propose(theta, np.array([1.0]), MHConfig(), rng)


def test_proposal_moments() -> None:
    theta = ParamPoint.of(0.5, 0.25)
    grad = np.array([1.0, -2.0])
    cfg = MHConfig(eta=0.1, xi=0.4)
    rng = np.random.default_rng(12)
    draws = np.array([propose(theta, grad, cfg, rng).as_vector() for _ in range(100_000)]) - theta.as_vector()
    band = 4 * cfg.xi / math.sqrt(len(draws))
    np.testing.assert_allclose(draws.mean(axis=0), -cfg.eta * grad, atol=band)
    np.testing.assert_allclose(draws.std(axis=0), cfg.xi, rtol=0.02)


def test_shared_noise_moves_every_coordinate_together() -> None:
    theta = ParamPoint((0.0, 0.0), (0.0, 0.0))
    cfg = MHConfig(eta=0.0, xi=0.4, noise_mode="shared-scalar")
    step = propose(theta, np.zeros(4), cfg, np.random.default_rng(3)).as_vector()
    assert np.all(step == step[0])


def test_proposal_density() -> None:
    cfg = MHConfig(eta=0.1, xi=0.4)
    frm = ParamPoint.of(0.2, 0.3)
    grad = np.array([0.5, -1.0])
    mode = ParamPoint.from_vector(frm.as_vector() - cfg.eta * grad)
    assert log_proposal_density(mode, frm, grad, cfg) == pytest.approx(-2 * math.log(0.4 * math.sqrt(2 * math.pi)))

    up = ParamPoint.from_vector(mode.as_vector() + 0.17)
    down = ParamPoint.from_vector(mode.as_vector() - 0.17)
    assert log_proposal_density(up, frm, grad, cfg) == pytest.approx(log_proposal_density(down, frm, grad, cfg))

    to = ParamPoint.of(0.5, -0.1)
    expected = sum(
        -0.5 * ((x - mu) / 0.4) ** 2 - math.log(0.4 * math.sqrt(2 * math.pi))
        for x, mu in zip(to.as_vector() - frm.as_vector(), -0.1 * grad, strict=True)
    )
    assert log_proposal_density(to, frm, grad, cfg) == pytest.approx(expected, abs=1e-12)

    with pytest.raises(InvalidInputError):
        log_proposal_density(to, frm, grad, MHConfig(xi=0.0))


def test_proposal_density_is_positive_everywhere() -> None:
    cfg = MHConfig(eta=0.1, xi=0.4)
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b, grad = rng.uniform(-10, 10, (3, 2))
        assert math.isfinite(log_proposal_density(ParamPoint.from_vector(a), ParamPoint.from_vector(b), grad, cfg))


def test_accept_rate() -> None:
    assert accept_rate(1.0, 0.5, -1.0, -1.0, 0.5) == 1.0
    assert accept_rate(1.0, 1.0, 0.0, 0.0, 0.5) == 1.0
    assert accept_rate(0.0, 2.0, 0.0, 0.0, 0.5) == pytest.approx(math.exp(-1))
    with pytest.raises(InvalidInputError):
        accept_rate(float("nan"), 1.0, 0.0, 0.0, 0.5)


def test_acceptance_ratio_balances_the_reverse_move() -> None:
    rng = np.random.default_rng(4)
    alpha = 0.5
    for _ in range(50):
        fx, fy, log_xy, log_yx = rng.normal(size=4)
        forward = accept_rate(fx, fy, log_xy, log_yx, alpha)
        backward = accept_rate(fy, fx, log_yx, log_xy, alpha)
        expected = math.exp(-alpha * (fy - fx) + log_yx - log_xy)
        assert forward / backward == pytest.approx(expected)


def test_single_downhill_epoch_is_accepted() -> None:
    state = run_mh(quadratic, ParamPoint.of(1.0, 1.0), MHConfig(t_max=1, eta=0.1, xi=0.0, alpha=1.0))
    assert state.accept_count == 1
    assert state.best.as_vector() == pytest.approx([1.0 - 0.2 * 0.7, 1.0 - 0.2 * 1.2])
    assert state.best_loss < quadratic(ParamPoint.of(1.0, 1.0))[0]


def test_chain_finds_quadratic_minimum_with_langevin_matched_noise() -> None:
    # xi**2 == 2 * eta / alpha
    hits = 0
    for seed in range(100):
        cfg = MHConfig(t_max=300, alpha=20.0, eta=0.1, xi=0.1, seed=seed)
        state = run_mh(quadratic, ParamPoint.of(1.3, -1.2), cfg)
        hits += np.linalg.norm(state.best.as_vector() - TARGET) < 0.1
    assert hits >= 95


def test_chain_with_undersized_noise_stays_at_start() -> None:
    # the reverse density sits about 8 noise widths out per coordinate
    theta0 = ParamPoint.of(1.3, -1.2)
    for seed in range(20):
        state = run_mh(quadratic, theta0, MHConfig(t_max=300, alpha=5.0, eta=0.1, xi=0.05, seed=seed))
        assert state.accept_count == 0
        assert state.best == theta0
        assert state.best_loss == quadratic(theta0)[0]


def test_chain_is_deterministic_and_keeps_its_best() -> None:
    cfg = MHConfig(t_max=200, seed=9)
    first = run_mh(quadratic, ParamPoint.of(2.0, 2.0), cfg)
    second = run_mh(quadratic, ParamPoint.of(2.0, 2.0), cfg)
    assert first.trace == second.trace
    assert first.accept_count <= first.epoch == 200
    accepted = [p.loss for p in first.trace if p.accepted]
    assert first.best_loss == min([quadratic(ParamPoint.of(2.0, 2.0))[0], *accepted])


def test_evaluator_failure_carries_epoch() -> None:
    calls = {"count": 0}

    def flaky(theta: ParamPoint) -> tuple[float, np.ndarray]:
        calls["count"] += 1
        if calls["count"] == 3:
            raise ValueError("boom")
        return quadratic(theta)

    with pytest.raises(EvaluationError) as info:
        run_mh(flaky, ParamPoint.of(0.0, 0.0), MHConfig(t_max=5))
    assert info.value.epoch == 2


def test_gradient_descent_trace() -> None:
    result = gradient_descent(quadratic, ParamPoint.of(1.0, 1.0), eta=0.1, iters=50)
    assert len(result.trace) == 51
    assert all(b <= a for a, b in zip(result.trace, result.trace[1:], strict=False))
    assert result.params.as_vector() == pytest.approx(TARGET, abs=1e-4)


def test_lbfgs_reaches_quadratic_minimum() -> None:
    result = lbfgs(quadratic, ParamPoint.of(1.0, 1.0), iters=50)
    assert result.loss == pytest.approx(0.0, abs=1e-10)
    assert result.trace[0] == pytest.approx(quadratic(ParamPoint.of(1.0, 1.0))[0])


def test_disabled_chain_is_cold_start_descent() -> None:
    loss = loss_provider(build_mvc(Graph.from_edges(3, [(0, 1), (1, 2)]), 2.0, 1.0), 1, "analytic")
    theta0 = ParamPoint.of(0.4, 2.0)
    cold = gradient_descent(loss, theta0, 0.1, 30)
    warm = warm_start(loss, theta0, None, 0.1, 30)
    assert warm.losses() == cold.trace
    assert warm.params == cold.params
    assert warm.chain is None


def test_warm_start_on_single_edge_reaches_global_minimum() -> None:
    model = build_mvc(Graph.from_edges(2, [(0, 1)]), 2.0, 1.0)
    reference = grid_minimum(AnalyticContext.from_model(model), polish=True).value
    for seed in range(3):
        cfg = MHConfig(t_max=600, alpha=0.5, xi=0.4, eta=0.1, seed=seed)
        result = warm_started_qaoa(model, 1, ParamPoint.of(0.1, 0.1), cfg, eta=0.1, iters=200)
        assert abs(result.loss - reference) <= 1e-3
        assert [p.phase for p in result.trace].count("mh") == 600
        assert result.params.wrapped().gammas[0] < 2 * math.pi


def test_small_steps_descend_monotonically() -> None:
    model = build_mvc(Graph.from_edges(2, [(0, 1)]), 2.0, 1.0)
    loss = loss_provider(model, 1, "analytic")
    result = gradient_descent(loss, ParamPoint.of(math.pi / 2 + 0.2, 3 * math.pi / 8 + 0.1), eta=1e-3, iters=100)
    assert all(b <= a + 1e-15 for a, b in zip(result.trace, result.trace[1:], strict=False))


def stiff(theta: ParamPoint) -> tuple[float, np.ndarray]:
    delta = theta.as_vector() - TARGET
    scale = np.array([400.0, 1.0])
    return float(delta @ (scale * delta)), 2 * scale * delta


def test_fixed_step_overshoots_a_sharp_minimum() -> None:
    theta0 = ParamPoint.of(0.31, -0.1)
    result = gradient_descent(stiff, theta0, eta=0.1, iters=5)
    assert result.loss > stiff(theta0)[0]


def test_keep_best_returns_lowest_iterate() -> None:
    theta0 = ParamPoint.of(0.31, -0.1)
    result = gradient_descent(stiff, theta0, eta=0.1, iters=5, keep_best=True)
    assert len(result.trace) == 6
    assert result.loss == min(result.trace) == stiff(theta0)[0]
    assert result.params == theta0

    stable = gradient_descent(stiff, theta0, eta=1e-3, iters=4000, keep_best=True)
    assert stable.loss == min(stable.trace)
    assert stable.params.as_vector() == pytest.approx(TARGET, abs=1e-3)


def test_warm_start_never_ends_above_chain_best() -> None:
    theta0 = ParamPoint.of(1.3, -1.2)
    for seed in range(5):
        result = warm_start(stiff, theta0, MHConfig(t_max=100, alpha=1.0, eta=1e-3, xi=0.05, seed=seed), 0.1, 20)
        assert result.chain is not None
        descent = [p.loss for p in result.trace if p.phase == "descent"]
        assert descent[0] == result.chain.best_loss
        assert result.loss == min(descent) <= result.chain.best_loss
