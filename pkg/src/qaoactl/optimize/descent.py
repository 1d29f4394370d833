"""Local optimizers over QAOA angles driven by a loss-and-gradient evaluator."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy import optimize

from qaoactl.core.errors import InvalidInputError
from qaoactl.sim.params import ParamPoint

FloatArray = npt.NDArray[np.float64]
LossAndGrad = Callable[[ParamPoint], tuple[float, FloatArray]]


@dataclass(frozen=True)
class DescentResult:
    params: ParamPoint
    loss: float
    trace: list[float] = field(default_factory=list)


def gradient_descent(
    loss_and_grad: LossAndGrad, theta0: ParamPoint, eta: float, iters: int, keep_best: bool = False
) -> DescentResult:
    """
    Fixed-step descent theta <- theta - eta * grad F for `iters` steps.

    trace[0] is the loss at theta0 and trace[k] the loss after k steps. With ``keep_best`` the
    result is the lowest-loss iterate (theta0 included) instead of the last one.
    """
    if eta < 0:
        raise InvalidInputError(f"Learning rate must be nonnegative, got {eta}")
    if iters < 0:
        raise InvalidInputError(f"Iteration count must be nonnegative, got {iters}")
    theta = theta0.as_vector()
    loss, grad = loss_and_grad(theta0)
    trace = [loss]
    best, best_loss = theta, loss
    for _ in range(iters):
        theta = theta - eta * grad
        loss, grad = loss_and_grad(ParamPoint.from_vector(theta))
        trace.append(loss)
        if loss < best_loss:
            best, best_loss = theta, loss
    if keep_best:
        return DescentResult(ParamPoint.from_vector(best), best_loss, trace)
    return DescentResult(ParamPoint.from_vector(theta), loss, trace)


def lbfgs(loss_and_grad: LossAndGrad, theta0: ParamPoint, iters: int) -> DescentResult:
    """L-BFGS-B from theta0; trace holds the loss at theta0 and after every accepted iterate."""
    if iters < 1:
        raise InvalidInputError(f"Iteration count must be positive, got {iters}")
    evaluated: dict[bytes, tuple[float, FloatArray]] = {}

    def objective(x: FloatArray) -> tuple[float, FloatArray]:
        key = x.tobytes()
        if key not in evaluated:
            evaluated[key] = loss_and_grad(ParamPoint.from_vector(x))
        return evaluated[key]

    x0 = theta0.as_vector()
    trace = [objective(x0)[0]]

    def record(xk: FloatArray) -> None:
        trace.append(objective(np.asarray(xk, dtype=np.float64))[0])

    result = optimize.minimize(
        objective, x0, jac=True, method="L-BFGS-B", callback=record, options={"maxiter": iters}
    )
    final = np.asarray(result.x, dtype=np.float64)
    loss = objective(final)[0]
    # never report a point above the start
    if loss > trace[0]:
        return DescentResult(theta0, trace[0], trace)
    return DescentResult(ParamPoint.from_vector(final), loss, trace)
