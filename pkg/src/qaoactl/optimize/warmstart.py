"""
Metropolis-Hastings warm start over QAOA angles.

The chain targets the unnormalized Boltzmann density exp(-alpha * F_p(theta)). Each epoch
proposes a gradient-informed Gaussian step

    theta' = theta - eta * grad F(theta) + xi * noise

and accepts with min(1, P(theta') G(theta | theta') / (P(theta) G(theta' | theta))), where
the reverse density is evaluated with the gradient at the candidate. The lowest-loss state
seen (the initial point included) seeds a closing fixed-step gradient descent whose best
iterate is returned, so the warm start never ends above the chain's best loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.stats import norm

from qaoactl.core.errors import EvaluationError, InvalidInputError, QaoactlError
from qaoactl.core.logging import get_logger
from qaoactl.core.models import MHSettings, NoiseMode
from qaoactl.optimize.descent import DescentResult, LossAndGrad, gradient_descent
from qaoactl.problems.ising import IsingModel
from qaoactl.sim.loss import LossMode, loss_provider
from qaoactl.sim.params import ParamPoint

logger = get_logger(__name__)

FloatArray = npt.NDArray[np.float64]
Phase = Literal["mh", "descent"]


@dataclass(frozen=True)
class MHConfig:
    t_max: int = 600
    alpha: float = 0.5
    eta: float = 0.1
    xi: float = 0.4
    seed: int = 0
    noise_mode: NoiseMode = "per-component"

    def __post_init__(self) -> None:
        if self.t_max < 1:
            raise InvalidInputError(f"t_max must be at least 1, got {self.t_max}")
        if self.alpha <= 0:
            raise InvalidInputError(f"alpha must be positive, got {self.alpha}")
        if self.eta < 0:
            raise InvalidInputError(f"eta must be nonnegative, got {self.eta}")
        if self.xi < 0:
            raise InvalidInputError(f"xi must be nonnegative, got {self.xi}")

    @classmethod
    def from_settings(cls, settings: MHSettings, seed: int) -> MHConfig | None:
        """None when t_max is 0, which disables the chain."""
        if settings.t_max == 0:
            return None
        return cls(settings.t_max, settings.alpha, settings.eta, settings.xi, seed, settings.noise_mode)


@dataclass(frozen=True)
class TracePoint:
    epoch: int
    phase: Phase
    loss: float
    accepted: bool | None = None


@dataclass
class ChainState:
    current: ParamPoint
    current_loss: float
    best: ParamPoint
    best_loss: float
    epoch: int = 0
    accept_count: int = 0
    trace: list[TracePoint] = field(default_factory=list)

    @property
    def acceptance_ratio(self) -> float:
        return self.accept_count / self.epoch if self.epoch else 0.0


@dataclass(frozen=True)
class WarmStartResult:
    params: ParamPoint
    loss: float
    trace: list[TracePoint]
    chain: ChainState | None = None

    def losses(self) -> list[float]:
        return [point.loss for point in self.trace]


def log_target(loss_value: float, alpha: float) -> float:
    if alpha <= 0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    return -alpha * loss_value


def _check_shape(theta: ParamPoint, grad: FloatArray) -> FloatArray:
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != (2 * theta.depth,):
        raise InvalidInputError(f"Gradient of shape {grad.shape} does not match depth {theta.depth}")
    return grad


def propose(theta: ParamPoint, grad: FloatArray, cfg: MHConfig, rng: np.random.Generator) -> ParamPoint:
    grad = _check_shape(theta, grad)
    if cfg.noise_mode == "shared-scalar":
        noise = np.full(grad.size, rng.standard_normal())
    else:
        noise = rng.standard_normal(grad.size)
    return ParamPoint.from_vector(theta.as_vector() - cfg.eta * grad + cfg.xi * noise)


def log_proposal_density(to: ParamPoint, frm: ParamPoint, grad_at_from: FloatArray, cfg: MHConfig) -> float:
    """log G(to | frm): independent N(-eta * grad, xi^2) per coordinate of (to - frm)."""
    if cfg.xi <= 0:
        raise InvalidInputError("The proposal density needs xi > 0")
    grad = _check_shape(frm, grad_at_from)
    step = to.as_vector() - frm.as_vector()
    return float(norm.logpdf(step, loc=-cfg.eta * grad, scale=cfg.xi).sum())


def accept_rate(curr_loss: float, cand_loss: float, log_g_forward: float, log_g_reverse: float, alpha: float) -> float:
    values = (curr_loss, cand_loss, log_g_forward, log_g_reverse, alpha)
    if any(math.isnan(x) for x in values):
        raise InvalidInputError(f"accept_rate got NaN input: {values}")
    log_ratio = log_target(cand_loss, alpha) - log_target(curr_loss, alpha) + log_g_reverse - log_g_forward
    if log_ratio >= 0:
        return 1.0
    return math.exp(log_ratio)


def _evaluate(loss_and_grad: LossAndGrad, theta: ParamPoint, epoch: int) -> tuple[float, FloatArray]:
    try:
        loss, grad = loss_and_grad(theta)
    except (QaoactlError, ArithmeticError, ValueError) as exc:
        raise EvaluationError(f"Loss evaluation failed at epoch {epoch}: {exc}", epoch) from exc
    return float(loss), np.asarray(grad, dtype=np.float64)


def run_mh(loss_and_grad: LossAndGrad, theta0: ParamPoint, cfg: MHConfig) -> ChainState:
    rng = np.random.default_rng(cfg.seed)
    loss, grad = _evaluate(loss_and_grad, theta0, 0)
    state = ChainState(current=theta0, current_loss=loss, best=theta0, best_loss=loss)

    for epoch in range(1, cfg.t_max + 1):
        candidate = propose(state.current, grad, cfg, rng)
        cand_loss, cand_grad = _evaluate(loss_and_grad, candidate, epoch)
        if cfg.xi > 0:
            log_forward = log_proposal_density(candidate, state.current, grad, cfg)
            log_reverse = log_proposal_density(state.current, candidate, cand_grad, cfg)
        else:
            log_forward = log_reverse = 0.0
        rate = accept_rate(state.current_loss, cand_loss, log_forward, log_reverse, cfg.alpha)
        accepted = bool(rng.random() < rate)

        state.epoch = epoch
        if accepted:
            state.accept_count += 1
            state.current, state.current_loss, grad = candidate, cand_loss, cand_grad
            if cand_loss < state.best_loss:
                state.best, state.best_loss = candidate, cand_loss
        state.trace.append(TracePoint(epoch, "mh", state.current_loss, accepted))
        logger.debug(f"epoch {epoch}: loss={cand_loss:.6f} rate={rate:.4f} accepted={accepted}")

    logger.debug(
        f"Chain finished: best_loss={state.best_loss:.6f} acceptance={state.acceptance_ratio:.3f}"
    )
    return state


def warm_start(
    loss_and_grad: LossAndGrad, theta0: ParamPoint, cfg: MHConfig | None, eta: float, iters: int
) -> WarmStartResult:
    """
    MH phase (skipped when cfg is None) followed by `iters` descent steps from the chain's best point.

    Without a chain this is the plain cold-start descent; after a chain the lowest-loss descent
    iterate is returned.
    """
    chain: ChainState | None = None
    trace: list[TracePoint] = []
    start = theta0
    if cfg is not None:
        chain = run_mh(loss_and_grad, theta0, cfg)
        trace.extend(chain.trace)
        start = chain.best

    descent: DescentResult = gradient_descent(loss_and_grad, start, eta, iters, keep_best=chain is not None)
    first = chain.epoch + 1 if chain is not None else 0
    trace.extend(TracePoint(first + k, "descent", loss) for k, loss in enumerate(descent.trace))
    return WarmStartResult(descent.params, descent.loss, trace, chain)


def warm_started_qaoa(
    model: IsingModel,
    depth: int,
    theta0: ParamPoint,
    cfg: MHConfig | None,
    eta: float = 0.1,
    iters: int = 200,
    mode: LossMode | None = None,
) -> WarmStartResult:
    """Two-phase warm-started QAOA on a model; depth 1 with a shared J uses the closed-form loss."""
    if mode is None:
        mode = "analytic" if depth == 1 and model.is_uniform_coupling() else "simulated"
    return warm_start(loss_provider(model, depth, mode), theta0, cfg, eta, iters)
