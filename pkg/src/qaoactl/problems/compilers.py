"""
Ising compilers for the constrained vertex problems.

Each problem is a constraint Hamiltonian H_a (number of violated edges) and an objective
Hamiltonian H_b (the quantity to minimize among constraint optima), both PSD. The combined
model a*H_a + b*H_b solves the constrained problem when a > b*U/L; the closed-form builders
below drop the identity term, as the problem-form equations do.
"""

from __future__ import annotations

from typing import Literal

from qaoactl.core.errors import CoefficientError, InvalidInputError
from qaoactl.core.logging import get_logger
from qaoactl.problems.graph import Graph, degree
from qaoactl.problems.ising import IsingModel, SpinConfig

logger = get_logger(__name__)

Problem = Literal["mvc", "mwvc", "mis"]
PROBLEMS: tuple[Problem, ...] = ("mvc", "mwvc", "mis")


def mvc_pair(g: Graph) -> tuple[IsingModel, IsingModel]:
    """H_a = sum_<ij> (z_i z_j + z_i + z_j + 1)/4 counts uncovered edges, H_b = sum (1 - z_i)/2."""
    couplings = {(u, v): -0.25 for u, v in g.edges}
    h_a = IsingModel.create(g.n, couplings, [-0.25 * degree(g, i) for i in range(g.n)], 0.25 * g.edge_count)
    h_b = IsingModel.create(g.n, None, [0.5] * g.n, 0.5 * g.n)
    return h_a, h_b


def mwvc_pair(g: Graph) -> tuple[IsingModel, IsingModel]:
    weights = _require_weights(g)
    h_a, _ = mvc_pair(g)
    h_b = IsingModel.create(g.n, None, [0.5 * w for w in weights], 0.5 * sum(weights))
    return h_a, h_b


def mis_pair(g: Graph) -> tuple[IsingModel, IsingModel]:
    """H_a penalizes adjacent pairs both in S, H_b = n - |S| counts the complement."""
    couplings = {(u, v): -0.25 for u, v in g.edges}
    h_a = IsingModel.create(g.n, couplings, [0.25 * degree(g, i) for i in range(g.n)], 0.25 * g.edge_count)
    h_b = IsingModel.create(g.n, None, [-0.5] * g.n, 0.5 * g.n)
    return h_a, h_b


def problem_pair(problem: Problem, g: Graph) -> tuple[IsingModel, IsingModel]:
    if problem == "mvc":
        return mvc_pair(g)
    if problem == "mwvc":
        return mwvc_pair(g)
    if problem == "mis":
        return mis_pair(g)
    raise InvalidInputError(f"Unknown problem: {problem}")


def build_mvc(g: Graph, a: float, b: float, strict: bool = True) -> IsingModel:
    check_coefficients("mvc", g, a, b, strict)
    return _closed_form(g, a, [b / 2 - (a / 4) * degree(g, i) for i in range(g.n)])


def build_mwvc(g: Graph, a: float, b: float, strict: bool = True) -> IsingModel:
    weights = _require_weights(g)
    check_coefficients("mwvc", g, a, b, strict)
    return _closed_form(g, a, [(b / 2) * w - (a / 4) * degree(g, i) for i, w in enumerate(weights)])


def build_mis(g: Graph, a: float, b: float, strict: bool = True) -> IsingModel:
    check_coefficients("mis", g, a, b, strict)
    return _closed_form(g, a, [-b / 2 + (a / 4) * degree(g, i) for i in range(g.n)])


def build_problem(problem: Problem, g: Graph, a: float, b: float, strict: bool = True) -> IsingModel:
    if problem == "mvc":
        return build_mvc(g, a, b, strict)
    if problem == "mwvc":
        return build_mwvc(g, a, b, strict)
    if problem == "mis":
        return build_mis(g, a, b, strict)
    raise InvalidInputError(f"Unknown problem: {problem}")


def _closed_form(g: Graph, a: float, fields: list[float]) -> IsingModel:
    return IsingModel.create(g.n, {(u, v): -a / 4 for u, v in g.edges}, fields, 0.0)


def _require_weights(g: Graph) -> tuple[float, ...]:
    if g.weights is None:
        raise InvalidInputError("MWVC needs vertex weights; attach them with assign_random_weights")
    return g.weights


def coefficient_threshold(problem: Problem, g: Graph, b: float) -> float:
    """Smallest a (exclusive) that the sufficient condition allows for this problem."""
    if problem == "mwvc":
        return sum(_require_weights(g)) * b
    return b


def check_coefficients(problem: Problem, g: Graph, a: float, b: float, strict: bool = True) -> bool:
    """Reject (strict) or log (exploration) coefficients outside a > threshold(b) > 0."""
    if b <= 0:
        raise CoefficientError(f"b must be positive, got {b}")
    threshold = coefficient_threshold(problem, g, b)
    if a > threshold:
        return True
    message = f"{problem}: a={a} does not exceed the sufficient bound {threshold} (b={b})"
    if strict:
        raise CoefficientError(message)
    logger.warning(message)
    return False


def mwvc_coefficients(g: Graph, b: float = 0.5, margin: float = 0.1) -> tuple[float, float]:
    """Coefficient rule a = b * sum(weights) + margin."""
    return b * sum(_require_weights(g)) + margin, b


def decode(problem: Problem, z: SpinConfig) -> frozenset[int]:
    """Vertex set encoded by z. Every problem reads the spin -1 side: the cover for MVC/MWVC and
    the independent set for MIS, whose H_b counts n - |{spin -1}|."""
    if problem not in PROBLEMS:
        raise InvalidInputError(f"Unknown problem: {problem}")
    return z.vertex_set()
