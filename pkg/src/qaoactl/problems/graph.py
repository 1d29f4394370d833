"""
Undirected graphs for the vertex problems.

A Graph wraps a frozen networkx graph on vertices 0..n-1. MWVC weights live on the
node attribute ``weight``. Edges are exposed once per pair as (u, v) with u < v, sorted,
so compilers and reports see a stable order.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from functools import cached_property
from pathlib import Path

import networkx as nx
import numpy as np

from qaoactl.core.errors import InvalidInputError, ReportIOError
from qaoactl.core.paths import ensure_parent

WEIGHT = "weight"


class Graph:
    """Immutable simple graph on vertices 0..n-1 with optional vertex weights."""

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        weights: Iterable[float] | None = None,
    ) -> None:
        if n < 1:
            raise InvalidInputError(f"Graph needs at least one vertex, got n={n}")
        structure = nx.empty_graph(n)
        for u, v in edges:
            if u == v:
                raise InvalidInputError(f"Self-loop on vertex {u} is not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"Edge ({u}, {v}) out of range for n={n}")
            structure.add_edge(int(u), int(v))
        if weights is not None:
            values = [float(w) for w in weights]
            if len(values) != n:
                raise InvalidInputError(f"Expected {n} weights, got {len(values)}")
            if any(w < 0 or not np.isfinite(w) for w in values):
                raise InvalidInputError("Vertex weights must be finite and nonnegative")
            nx.set_node_attributes(structure, dict(enumerate(values)), WEIGHT)
        self._structure: nx.Graph = nx.freeze(structure)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], weights: Iterable[float] | None = None) -> Graph:
        return cls(n, edges, weights)

    @classmethod
    def from_networkx(cls, structure: nx.Graph) -> Graph:
        """Adopt a networkx graph whose nodes are exactly 0..n-1."""
        n = structure.number_of_nodes()
        if set(structure.nodes) != set(range(n)):
            raise InvalidInputError("Graph nodes must be labelled 0..n-1")
        if nx.number_of_selfloops(structure):
            raise InvalidInputError("Self-loops are not allowed")
        attrs = nx.get_node_attributes(structure, WEIGHT)
        weights = [attrs[i] for i in range(n)] if len(attrs) == n else None
        return cls(n, structure.edges, weights)

    @property
    def structure(self) -> nx.Graph:
        return self._structure

    @property
    def n(self) -> int:
        return int(self._structure.number_of_nodes())

    @property
    def edge_count(self) -> int:
        return int(self._structure.number_of_edges())

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((min(u, v), max(u, v)) for u, v in self._structure.edges))

    @cached_property
    def weights(self) -> tuple[float, ...] | None:
        attrs = nx.get_node_attributes(self._structure, WEIGHT)
        if not attrs:
            return None
        return tuple(float(attrs[i]) for i in range(self.n))

    def with_weights(self, weights: Iterable[float]) -> Graph:
        return Graph(self.n, self.edges, weights)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        return bool(self._structure.has_edge(u, v))

    def is_connected(self) -> bool:
        return bool(nx.is_connected(self._structure))

    def _check_vertex(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise InvalidInputError(f"Vertex {u} out of range for n={self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.edges, self.weights) == (other.n, other.edges, other.weights)

    def __hash__(self) -> int:
        return hash((self.n, self.edges, self.weights))

    def __repr__(self) -> str:
        weighted = "" if self.weights is None else ", weighted"
        return f"Graph(n={self.n}, edges={self.edge_count}{weighted})"


def gen_erdos_renyi(n: int, p_edge: float, seed: int) -> Graph:
    """G(n, p): every unordered pair kept independently with probability p_edge."""
    if not 0.0 <= p_edge <= 1.0:
        raise InvalidInputError(f"p_edge must be between 0 and 1, got {p_edge}")
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    return Graph.from_networkx(nx.gnp_random_graph(n, p_edge, seed=seed))


def assign_random_weights(g: Graph, lo: float, hi: float, seed: int) -> Graph:
    if lo > hi:
        raise InvalidInputError(f"Weight interval is empty: lo={lo} > hi={hi}")
    if lo < 0:
        raise InvalidInputError(f"Weights must be nonnegative, got lo={lo}")
    rng = np.random.default_rng(seed)
    return g.with_weights(rng.uniform(lo, hi, size=g.n).tolist())


def degree(g: Graph, u: int) -> int:
    g._check_vertex(u)
    return int(g.structure.degree[u])


def neighbors(g: Graph, u: int) -> frozenset[int]:
    g._check_vertex(u)
    return frozenset(g.structure.neighbors(u))


def common_neighbors(g: Graph, u: int, v: int) -> int:
    g._check_vertex(u)
    g._check_vertex(v)
    if u == v:
        raise InvalidInputError("common_neighbors needs two distinct vertices")
    return len(set(nx.common_neighbors(g.structure, u, v)))


def derive_seed(master: int, *keys: int) -> int:
    """Child seed for a (master, instance, init, ...) tuple, stable across platforms."""
    sequence = np.random.SeedSequence([master & 0xFFFFFFFF, *[k & 0xFFFFFFFF for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def graph_to_dict(g: Graph) -> dict[str, object]:
    """Graph file document: ``n``, ``edges`` as [u, v] pairs and optional ``weights``."""
    data: dict[str, object] = {"n": g.n, "edges": [[u, v] for u, v in g.edges]}
    if g.weights is not None:
        data["weights"] = list(g.weights)
    return data


def graph_from_dict(data: dict[str, object]) -> Graph:
    try:
        n = int(data["n"])  # type: ignore[call-overload]
        edges = [(int(u), int(v)) for u, v in data.get("edges", [])]  # type: ignore[attr-defined]
        raw_weights = data.get("weights")
        weights = None if raw_weights is None else [float(w) for w in raw_weights]  # type: ignore[attr-defined]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"Malformed graph document: {exc}") from exc
    return Graph.from_edges(n, edges, weights)


def save_graph(g: Graph, path: Path) -> None:
    try:
        ensure_parent(path)
        path.write_text(json.dumps(graph_to_dict(g), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Cannot write graph to {path}: {exc}") from exc


def load_graph(path: Path) -> Graph:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportIOError(f"Cannot read graph from {path}: {exc}") from exc
    return graph_from_dict(data)
