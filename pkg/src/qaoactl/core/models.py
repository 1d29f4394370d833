from __future__ import annotations

import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

ExperimentKind = Literal["mwvc", "mvc-warmstart", "local-minima"]
ProblemKind = Literal["mvc", "mwvc", "mis"]
NoiseMode = Literal["per-component", "shared-scalar"]

PositiveInt = Annotated[int, Field(ge=1)]
Probability = Annotated[float, Field(ge=0.0, le=1.0)]


class AngleBox(BaseModel):
    """Sampling box for initial angles: gammas in [gamma_low, gamma_high], betas likewise."""

    model_config = ConfigDict(frozen=True)

    gamma_low: float = -math.pi
    gamma_high: float = math.pi
    beta_low: float = -math.pi
    beta_high: float = math.pi

    @model_validator(mode="after")
    def _ordered(self) -> AngleBox:
        if self.gamma_low > self.gamma_high or self.beta_low > self.beta_high:
            raise ValueError("angle box bounds must satisfy low <= high")
        return self


SYMMETRIC_BOX = AngleBox()
PERIODIC_BOX = AngleBox(gamma_low=0.0, gamma_high=2 * math.pi, beta_low=0.0, beta_high=math.pi)


class CoefficientRule(BaseModel):
    """Either fixed (a, b) or the weighted rule a = b * sum(weights) + margin."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["fixed", "weighted"] = "fixed"
    a: float | None = 2.0
    b: float = Field(1.0, gt=0.0)
    margin: float = Field(0.1, gt=0.0)

    @model_validator(mode="after")
    def _fixed_needs_a(self) -> CoefficientRule:
        if self.kind == "fixed" and (self.a is None or self.a <= 0):
            raise ValueError("fixed coefficient rule needs a positive 'a'")
        return self


class OptimizerSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: Literal["descent", "lbfgs"] = "descent"
    eta: float = Field(0.1, ge=0.0)
    iters: PositiveInt = 200


class MHSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_max: int = Field(600, ge=0)
    alpha: float = Field(0.5, gt=0.0)
    xi: float = Field(0.4, ge=0.0)
    eta: float = Field(0.1, ge=0.0)
    noise_mode: NoiseMode = "per-component"
    descent_eta: float | None = Field(None, ge=0.0)


class GridSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_gamma: PositiveInt = 200
    n_beta: PositiveInt = 100


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ExperimentKind = "mwvc"
    problem: ProblemKind = "mwvc"
    sizes: list[PositiveInt] = Field(default_factory=lambda: [4, 6, 8, 10], min_length=1)
    edge_prob: Probability = 0.5
    edge_probs: list[Probability] | None = None
    cases_per_size: PositiveInt = 10
    depths: list[PositiveInt] = Field(default_factory=lambda: [1, 2, 3], min_length=1)
    n_inits: PositiveInt = 20
    init_domain: AngleBox = SYMMETRIC_BOX
    coeff_rule: CoefficientRule = CoefficientRule(kind="weighted", a=None, b=0.5, margin=0.1)
    weight_range: tuple[float, float] = (0.0, 3.0)
    optimizer: OptimizerSettings = OptimizerSettings(method="lbfgs", eta=0.1, iters=200)
    mh: MHSettings = MHSettings()
    grid: GridSettings = GridSettings()
    local_minimum_tol: float = Field(1e-3, gt=0.0)
    strict: bool = True
    workers: PositiveInt = 1
    seed: int = 0

    @model_validator(mode="after")
    def _weights_ordered(self) -> ExperimentConfig:
        lo, hi = self.weight_range
        if lo > hi or lo < 0:
            raise ValueError("weight_range must satisfy 0 <= lo <= hi")
        return self

    def sweep_edge_probs(self) -> list[float]:
        return list(self.edge_probs) if self.edge_probs else [self.edge_prob]


class RunResult(BaseModel):
    """Outcome of one optimizer run (one method) from one initial point."""

    method: Literal["qaoa", "cold", "warm"]
    final: list[float]
    final_loss: float
    probability: float | None = None
    trace: list[float] = Field(default_factory=list)


class InitRecord(BaseModel):
    depth: int
    init_index: int
    initial: list[float]
    runs: list[RunResult]

    def run(self, method: str) -> RunResult:
        for item in self.runs:
            if item.method == method:
                return item
        raise KeyError(method)


class DepthResult(BaseModel):
    depth: int
    best_loss: float
    probability: float | None = None


class CaseRecord(BaseModel):
    case_id: int
    size: int
    edge_prob: float
    seed: int
    n_edges: int
    a: float
    b: float
    exact_optimum: float
    ground_states: int
    grid_minimum: float | None = None
    local_minimum_fraction: float | None = None
    depth_results: list[DepthResult] = Field(default_factory=list)
    inits: list[InitRecord] = Field(default_factory=list)


class AggregateRecord(BaseModel):
    """Mean/variance summary. case_id is set for per-case trajectories, None for ensemble rows."""

    size: int
    edge_prob: float
    depth: int
    method: str
    case_id: int | None = None
    cases: int
    mean_best_loss: float
    var_best_loss: float
    mean_probability: float | None = None
    var_probability: float | None = None
    mean_local_minimum_fraction: float | None = None
    mean_trace: list[float] = Field(default_factory=list)
    var_trace: list[float] = Field(default_factory=list)


class ExperimentReport(BaseModel):
    kind: ExperimentKind
    config: ExperimentConfig
    cases: list[CaseRecord] = Field(default_factory=list)
    aggregates: list[AggregateRecord] = Field(default_factory=list)
