from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qaoactl.core.errors import ConsistencyError
from qaoactl.core.logging import get_logger
from qaoactl.core.models import AngleBox, CoefficientRule, ExperimentConfig, ProblemKind
from qaoactl.problems.compilers import build_problem, mwvc_coefficients, problem_pair
from qaoactl.problems.graph import Graph, assign_random_weights, derive_seed, gen_erdos_renyi
from qaoactl.problems.ising import IsingModel, SpinConfig
from qaoactl.problems.spectrum import verify_theorem1
from qaoactl.sim.params import ParamPoint, sample_point

logger = get_logger(__name__)


@dataclass(frozen=True)
class Instance:
    case_id: int
    size: int
    edge_prob: float
    seed: int
    graph: Graph
    a: float
    b: float
    model: IsingModel
    ground_states: tuple[SpinConfig, ...]

    @property
    def exact_optimum(self) -> float:
        return float(self.model.diagonal[self.ground_states[0].to_index()])


def resolve_coefficients(rule: CoefficientRule, problem: ProblemKind, g: Graph) -> tuple[float, float]:
    if rule.kind == "weighted":
        if problem != "mwvc":
            return rule.b * g.n + rule.margin, rule.b
        return mwvc_coefficients(g, rule.b, rule.margin)
    assert rule.a is not None
    return rule.a, rule.b


def instance_seed(cfg: ExperimentConfig, size: int, edge_prob: float, case_id: int) -> int:
    return derive_seed(cfg.seed, size, round(edge_prob * 1_000_000), case_id)


def build_instance(cfg: ExperimentConfig, size: int, edge_prob: float, case_id: int) -> Instance:
    """
    Generate, compile and certify one experiment case.

    The constraint/objective pair is checked with verify_theorem1 before any optimization;
    a failing certificate under strict coefficients is an internal bug and aborts the run.
    """
    seed = instance_seed(cfg, size, edge_prob, case_id)
    graph = gen_erdos_renyi(size, edge_prob, seed)
    if cfg.problem == "mwvc":
        lo, hi = cfg.weight_range
        graph = assign_random_weights(graph, lo, hi, derive_seed(seed, 1))

    a, b = resolve_coefficients(cfg.coeff_rule, cfg.problem, graph)
    model = build_problem(cfg.problem, graph, a, b, strict=cfg.strict)
    h_a, h_b = problem_pair(cfg.problem, graph)
    certificate = verify_theorem1(h_a, h_b, a, b)
    if not certificate.holds:
        message = (
            f"case {case_id} (n={size}, p={edge_prob}, seed={seed}): combined ground states differ from "
            f"the constrained optima on {[z.bitstring() for z in certificate.violations]}"
        )
        if cfg.strict:
            raise ConsistencyError(message)
        logger.warning(message)

    logger.info(f"Case {case_id}: n={size} p={edge_prob} edges={graph.edge_count} a={a:.4f} b={b:.4f}")
    return Instance(
        case_id=case_id,
        size=size,
        edge_prob=edge_prob,
        seed=seed,
        graph=graph,
        a=a,
        b=b,
        model=model,
        ground_states=certificate.ground_states,
    )


def initial_points(instance: Instance, depth: int, count: int, box: AngleBox) -> list[ParamPoint]:
    rng = np.random.default_rng(derive_seed(instance.seed, depth, 2))
    bounds = (box.gamma_low, box.gamma_high, box.beta_low, box.beta_high)
    return [sample_point(rng, depth, bounds) for _ in range(count)]
