from __future__ import annotations

from pathlib import Path
from typing import Literal

from qaoactl.core.errors import InvalidInputError
from qaoactl.core.models import CoefficientRule, ProblemKind
from qaoactl.problems.compilers import build_problem, decode, problem_pair
from qaoactl.problems.graph import assign_random_weights, derive_seed, gen_erdos_renyi, load_graph, save_graph
from qaoactl.problems.ising import brute_force, load_model, save_model, shift_psd
from qaoactl.problems.spectrum import spectrum_analysis, verify_theorem1
from qaoactl.services.instance_service import resolve_coefficients

ModelPart = Literal["combined", "constraint", "objective"]


def generate_graph(
    n: int, p_edge: float, seed: int, out: Path, weights: tuple[float, float] | None = None
) -> dict[str, object]:
    graph = gen_erdos_renyi(n, p_edge, seed)
    if weights is not None:
        graph = assign_random_weights(graph, weights[0], weights[1], derive_seed(seed, 1))
    save_graph(graph, out)
    return {"path": str(out), "n": graph.n, "edges": graph.edge_count, "weighted": graph.weights is not None}


def build_ising(
    graph_path: Path,
    problem: ProblemKind,
    out: Path,
    a: float | None = None,
    b: float = 1.0,
    margin: float = 0.1,
    part: ModelPart = "combined",
    strict: bool = True,
) -> dict[str, object]:
    graph = load_graph(graph_path)
    if part == "combined":
        rule = CoefficientRule(kind="weighted" if a is None else "fixed", a=a, b=b, margin=margin)
        a_value, b_value = resolve_coefficients(rule, problem, graph)
        model = build_problem(problem, graph, a_value, b_value, strict=strict)
        summary: dict[str, object] = {"a": a_value, "b": b_value}
    else:
        h_a, h_b = problem_pair(problem, graph)
        model = shift_psd(h_a if part == "constraint" else h_b)
        summary = {}
    save_model(model, out)
    return {
        "path": str(out),
        "problem": problem,
        "part": part,
        "n": model.n,
        "couplings": len(model.couplings),
        **summary,
    }


def solve_exactly(model_path: Path, problem: ProblemKind | None = None) -> dict[str, object]:
    model = load_model(model_path)
    minimum, ground = brute_force(model)
    result: dict[str, object] = {"minimum": minimum, "ground_states": [z.bitstring() for z in ground]}
    if problem is not None:
        result["solutions"] = [sorted(decode(problem, z)) for z in ground]
    return result


def certify(graph_path: Path, problem: ProblemKind, a: float, b: float) -> dict[str, object]:
    if a <= 0 or b <= 0:
        raise InvalidInputError(f"Coefficients must be positive, got a={a}, b={b}")
    graph = load_graph(graph_path)
    h_a, h_b = problem_pair(problem, graph)
    spectrum = spectrum_analysis(h_a, h_b)
    certificate = verify_theorem1(h_a, h_b, a, b)
    return {"problem": problem, "spectrum": spectrum.to_dict(), "certificate": certificate.to_dict()}
