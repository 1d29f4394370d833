"""Exhaustive combinatorial search, used as ground truth for the compiled Hamiltonians."""

from __future__ import annotations

import itertools

from qaoactl.core.errors import BudgetError, InvalidInputError
from qaoactl.problems.graph import Graph

ORACLE_LIMIT = 20


def is_vertex_cover(g: Graph, members: frozenset[int]) -> bool:
    return all(u in members or v in members for u, v in g.edges)


def is_independent_set(g: Graph, members: frozenset[int]) -> bool:
    return not any(u in members and v in members for u, v in g.edges)


def min_vertex_covers(g: Graph) -> list[frozenset[int]]:
    """All covers of minimum size; sizes are scanned upward so the first hit is optimal."""
    _check_size(g)
    nodes = range(g.n)
    for k in range(g.n + 1):
        found = [
            frozenset(subset)
            for subset in itertools.combinations(nodes, k)
            if is_vertex_cover(g, frozenset(subset))
        ]
        if found:
            return found
    return [frozenset(nodes)]


def max_independent_sets(g: Graph) -> list[frozenset[int]]:
    _check_size(g)
    nodes = range(g.n)
    for k in range(g.n, -1, -1):
        found = [
            frozenset(subset)
            for subset in itertools.combinations(nodes, k)
            if is_independent_set(g, frozenset(subset))
        ]
        if found:
            return found
    return [frozenset()]


def min_weight_vertex_covers(g: Graph) -> list[frozenset[int]]:
    if g.weights is None:
        raise InvalidInputError("Weighted cover search needs vertex weights")
    _check_size(g)
    weights = g.weights
    best = float("inf")
    winners: list[frozenset[int]] = []
    for mask in range(1 << g.n):
        members = frozenset(i for i in range(g.n) if (mask >> i) & 1)
        if not is_vertex_cover(g, members):
            continue
        total = sum(weights[i] for i in sorted(members))
        if total < best:
            best, winners = total, [members]
        elif total == best:
            winners.append(members)
    return winners


def optimal_sets(problem: str, g: Graph) -> list[frozenset[int]]:
    if problem == "mvc":
        return min_vertex_covers(g)
    if problem == "mwvc":
        return min_weight_vertex_covers(g)
    if problem == "mis":
        return max_independent_sets(g)
    raise InvalidInputError(f"Unknown problem: {problem}")


def _check_size(g: Graph) -> None:
    if g.n > ORACLE_LIMIT:
        raise BudgetError(f"Exhaustive subset search is capped at n <= {ORACLE_LIMIT}, got {g.n}")
