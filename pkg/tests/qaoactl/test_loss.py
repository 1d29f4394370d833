from __future__ import annotations

import numpy as np
import pytest

from qaoactl.core.errors import InvalidInputError, ScopeError
from qaoactl.problems.compilers import build_mvc
from qaoactl.problems.graph import gen_erdos_renyi
from qaoactl.problems.ising import IsingModel
from qaoactl.sim.loss import loss_provider
from qaoactl.sim.params import ParamPoint


@pytest.fixture()
def model() -> IsingModel:
    return build_mvc(gen_erdos_renyi(5, 0.6, seed=4), 2.0, 1.0)


def test_analytic_and_simulated_agree_at_depth_one(model: IsingModel) -> None:
    analytic = loss_provider(model, 1, "analytic")
    simulated = loss_provider(model, 1, "simulated")
    rng = np.random.default_rng(0)
    for gamma, beta in rng.uniform(-3, 3, (10, 2)):
        point = ParamPoint.of(gamma, beta)
        loss_a, grad_a = analytic(point)
        loss_s, grad_s = simulated(point)
        assert loss_a == pytest.approx(loss_s, abs=1e-9)
        np.testing.assert_allclose(grad_a, grad_s, atol=1e-5)


def test_simulated_depth_two_at_zero_angles_returns_constant() -> None:
    shifted = IsingModel.create(3, {(0, 1): 1.0}, [0.5, 0.0, -0.5], 0.7)
    loss, grad = loss_provider(shifted, 2, "simulated")(ParamPoint.zeros(2))
    assert loss == pytest.approx(0.7, abs=1e-12)
    assert grad.shape == (4,)


def test_analytic_mode_scope(model: IsingModel) -> None:
    with pytest.raises(ScopeError):
        loss_provider(model, 2, "analytic")
    with pytest.raises(ScopeError):
        loss_provider(IsingModel.create(3, {(0, 1): 1.0, (1, 2): 0.5}), 1, "analytic")


def test_depth_mismatch_is_rejected(model: IsingModel) -> None:
    loss = loss_provider(model, 1, "simulated")
    with pytest.raises(InvalidInputError):
        loss(ParamPoint.zeros(2))
    with pytest.raises(InvalidInputError):
        loss_provider(model, 0, "simulated")
