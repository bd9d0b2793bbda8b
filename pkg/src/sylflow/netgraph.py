"""Undirected connected communication graphs and their Laplacians.

Nodes are 1-based. Graphs are unweighted, undirected, and validated to be
connected at construction time (every convergence statement in the package
assumes a connected topology, so failing early beats a silently stalled flow).
A :class:`DoubleLayerNetwork` is the two-level topology used by the clustering
flow: an outer graph on n clusters plus one inner graph per cluster, each on
n nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .densela import sym_eig_desc
from .errors import ConnectivityError, DimensionError

__all__ = [
    "NetworkGraph",
    "DoubleLayerNetwork",
    "laplacian",
    "algebraic_connectivity",
    "max_laplacian_eigenvalue",
    "make_cycle",
    "make_complete",
    "make_path",
    "from_edges",
]

#: A connected graph has exactly one Laplacian eigenvalue below this.
_CONNECTED_TOL = 1e-9


def _normalize_edges(node_count: int, edges) -> frozenset:
    seen = set()
    for pair in edges:
        try:
            i, j = pair
        except (TypeError, ValueError):
            raise DimensionError(f"edge {pair!r} is not a pair") from None
        i, j = int(i), int(j)
        if i == j:
            raise DimensionError(f"self-loop at node {i} is not allowed")
        if not (1 <= i <= node_count and 1 <= j <= node_count):
            raise DimensionError(
                f"edge ({i},{j}) out of range for {node_count} nodes (1-based)"
            )
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DimensionError(f"duplicate edge ({key[0]},{key[1]})")
        seen.add(key)
    return frozenset(seen)


@dataclass(frozen=True)
class NetworkGraph:
    """Undirected connected graph on 1-based nodes 1..node_count."""

    node_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.node_count < 1:
            raise DimensionError(f"need a positive node count, got {self.node_count}")
        object.__setattr__(self, "edges", _normalize_edges(self.node_count, self.edges))
        if self.node_count == 1:
            return  # a lone node is trivially connected
        lam = sym_eig_desc(laplacian(self))
        if lam[-2] <= _CONNECTED_TOL:
            raise ConnectivityError(
                f"graph on {self.node_count} nodes with {len(self.edges)} edges "
                "is not connected"
            )

    def neighbors(self, i: int) -> tuple:
        """Sorted neighbor list of node i (1-based)."""
        if not 1 <= i <= self.node_count:
            raise DimensionError(f"node {i} out of range 1..{self.node_count}")
        out = [b if a == i else a for (a, b) in self.edges if i in (a, b)]
        return tuple(sorted(out))


@dataclass(frozen=True)
class DoubleLayerNetwork:
    """Outer graph on n clusters plus one inner graph per cluster, each on n nodes."""

    outer: NetworkGraph
    inner: tuple

    def __post_init__(self):
        object.__setattr__(self, "inner", tuple(self.inner))
        n = self.outer.node_count
        if len(self.inner) != n:
            raise DimensionError(
                f"need one inner graph per cluster: got {len(self.inner)} for {n} clusters"
            )
        for k, g in enumerate(self.inner, start=1):
            if not isinstance(g, NetworkGraph):
                raise DimensionError(f"inner graph {k} is not a NetworkGraph")
            if g.node_count != n:
                raise DimensionError(
                    f"inner graph {k} has {g.node_count} nodes, expected {n}"
                )


def laplacian(g: NetworkGraph) -> np.ndarray:
    """Graph Laplacian L = D - A: symmetric, rows sum to zero, PSD."""
    n = g.node_count
    L = np.zeros((n, n))
    for (i, j) in g.edges:
        L[i - 1, j - 1] -= 1.0
        L[j - 1, i - 1] -= 1.0
        L[i - 1, i - 1] += 1.0
        L[j - 1, j - 1] += 1.0
    return L


def algebraic_connectivity(g: NetworkGraph) -> float:
    """Second-smallest Laplacian eigenvalue (positive for connected graphs)."""
    if g.node_count < 2:
        raise DimensionError("algebraic connectivity needs at least 2 nodes")
    return float(sym_eig_desc(laplacian(g))[-2])


def max_laplacian_eigenvalue(g: NetworkGraph) -> float:
    """Largest Laplacian eigenvalue lambda_1(L) (used by rate bounds and dt)."""
    return float(sym_eig_desc(laplacian(g))[0])


def make_path(n: int) -> NetworkGraph:
    """Path 1-2-...-n."""
    _require_n(n)
    return NetworkGraph(n, [(i, i + 1) for i in range(1, n)])


def make_cycle(n: int) -> NetworkGraph:
    """Cycle 1-2-...-n-1 (for n = 2 this degenerates to the single edge)."""
    _require_n(n)
    edges = [(i, i + 1) for i in range(1, n)]
    if n > 2:
        edges.append((1, n))
    return NetworkGraph(n, edges)


def make_complete(n: int) -> NetworkGraph:
    """Complete graph K_n: all n(n-1)/2 edges."""
    _require_n(n)
    return NetworkGraph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def from_edges(n: int, edges) -> NetworkGraph:
    """Build a graph from an explicit edge list, validating connectivity."""
    _require_n(n)
    return NetworkGraph(n, edges)


def _require_n(n: int):
    if n < 2:
        raise DimensionError(f"need at least 2 nodes, got {n}")
