"""
Uniform loss-and-gradient evaluators for QAOA angles.

Optimizers and the warm-start chain only see `LossFunction`: call it with a ParamPoint and
get (loss, gradient vector ordered like ParamPoint.as_vector()).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt

from qaoactl.core.errors import InvalidInputError, ScopeError
from qaoactl.problems.ising import IsingModel
from qaoactl.sim.analytic import AnalyticContext, f1, f1_and_grad
from qaoactl.sim.params import ParamPoint
from qaoactl.sim.statevector import ansatz, expectation

LossMode = Literal["analytic", "simulated"]
FD_STEP = 1e-6

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class LossFunction:
    model: IsingModel
    depth: int
    mode: LossMode
    fd_step: float = FD_STEP
    _context: AnalyticContext | None = field(default=None, repr=False)

    def _check(self, params: ParamPoint) -> None:
        if params.depth != self.depth:
            raise InvalidInputError(f"Evaluator is for depth {self.depth}, got parameters of depth {params.depth}")

    def value(self, params: ParamPoint) -> float:
        self._check(params)
        if self._context is not None:
            return f1(self._context, params.gammas[0], params.betas[0])
        return expectation(ansatz(self.model, params), self.model)

    def __call__(self, params: ParamPoint) -> tuple[float, FloatArray]:
        self._check(params)
        if self._context is not None:
            value, dgamma, dbeta = f1_and_grad(self._context, params.gammas[0], params.betas[0])
            return value, np.array([dgamma, dbeta])
        return self.value(params), self._finite_difference(params)

    def _finite_difference(self, params: ParamPoint) -> FloatArray:
        theta = params.as_vector()
        grad = np.empty_like(theta)
        for k in range(theta.size):
            step = np.zeros_like(theta)
            step[k] = self.fd_step
            upper = self.value(ParamPoint.from_vector(theta + step))
            lower = self.value(ParamPoint.from_vector(theta - step))
            grad[k] = (upper - lower) / (2 * self.fd_step)
        return grad


def loss_provider(model: IsingModel, depth: int, mode: LossMode = "simulated") -> LossFunction:
    """
    Build the F_p evaluator for a model.

    "analytic" uses the depth-1 closed form and needs p = 1 with a shared coupling J;
    "simulated" runs the statevector ansatz and differentiates by central differences.
    """
    if depth < 1:
        raise InvalidInputError(f"Depth must be at least 1, got {depth}")
    if mode == "analytic":
        if depth != 1:
            raise ScopeError(f"The closed-form loss covers depth 1 only, got depth {depth}")
        return LossFunction(model, depth, mode, _context=AnalyticContext.from_model(model))
    if mode == "simulated":
        return LossFunction(model, depth, mode)
    raise InvalidInputError(f"Unknown loss mode: {mode}")
