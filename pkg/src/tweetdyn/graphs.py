"""Undirected weighted graphs and greedy modularity community detection.

The clustering is agglomerative: start from singleton communities and repeat
the merge with the largest modularity gain while some gain is strictly
positive. Determinism is pinned down by the tie-break: among merges with equal
gain, take the pair whose (smallest vertex id, then smallest id of the other
community's representative) sorts first. Vertex ids are compared as strings.

Modularity of a partition of graph G with symmetric weights A:

    Q = sum_c [ w_in(c) / (2m) - (deg(c) / (2m))^2 ]

where ``2m`` is the total degree, ``w_in(c)`` counts internal weight with both
orientations, and ``deg(c)`` sums member degrees.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)


def _edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable undirected graph; no self loops, weights strictly positive."""

    vertices: tuple[str, ...]
    edges: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        verts = tuple(sorted(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        vset = set(verts)
        edges: dict[tuple[str, str], float] = {}
        for (u, v), w in self.edges.items():
            if u == v:
                raise ValueError(f"self loop on {u!r}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u!r}, {v!r}) references unknown vertex")
            if not w > 0:
                raise ValueError(f"edge ({u!r}, {v!r}) weight {w} not positive")
            key = _edge_key(u, v)
            if key in edges:
                raise ValueError(f"duplicate edge {key}")
            edges[key] = float(w)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", dict(sorted(edges.items())))

    @classmethod
    def from_edges(
        cls,
        edge_weights: Mapping[tuple[str, str], float],
        extra_vertices: Iterable[str] = (),
    ) -> "WeightedGraph":
        verts = set(extra_vertices)
        for u, v in edge_weights:
            verts.add(u)
            verts.add(v)
        merged: dict[tuple[str, str], float] = {}
        for (u, v), w in edge_weights.items():
            key = _edge_key(u, v)
            merged[key] = merged.get(key, 0.0) + float(w)
        return cls(vertices=tuple(sorted(verts)), edges=merged)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> float:
        """Sum of edge weights (each undirected edge counted once)."""
        return sum(self.edges.values())

    def weight(self, u: str, v: str) -> float:
        return self.edges.get(_edge_key(u, v), 0.0)

    def degree(self, u: str) -> float:
        return sum(w for (a, b), w in self.edges.items() if u in (a, b))

    def degrees(self) -> dict[str, float]:
        deg = {v: 0.0 for v in self.vertices}
        for (u, v), w in self.edges.items():
            deg[u] += w
            deg[v] += w
        return deg

    def neighbors(self, u: str) -> list[str]:
        out = [v if a == u else a for (a, v) in self.edges if u in (a, v)]
        return sorted(out)


def modularity(graph: WeightedGraph, partition: Sequence[Iterable[str]]) -> float:
    """Modularity Q of a partition; requires an exact cover of the vertices."""
    groups = [frozenset(part) for part in partition]
    seen: set[str] = set()
    for g in groups:
        if g & seen:
            raise ValueError("partition parts overlap")
        seen |= g
    if seen != set(graph.vertices):
        raise ValueError("partition does not cover the vertex set exactly")
    two_m = 2.0 * graph.total_weight
    if two_m == 0:
        return 0.0
    deg = graph.degrees()
    q = 0.0
    for g in groups:
        w_in = 0.0
        for (u, v), w in graph.edges.items():
            if u in g and v in g:
                w_in += 2.0 * w
        d = sum(deg[u] for u in g)
        q += w_in / two_m - (d / two_m) ** 2
    return q


def modularity_communities(
    graph: WeightedGraph,
) -> tuple[list[frozenset[str]], float]:
    """Greedy modularity maximization from singletons.

    Returns the partition (parts sorted by their smallest member) and its Q.
    Merges stop when no pair of connected communities yields a strictly
    positive gain. An edgeless graph keeps every vertex in its own community
    with Q = 0.
    """
    if graph.n_edges == 0:
        logger.warning("modularity_communities: edgeless graph, singletons kept")
        return [frozenset([v]) for v in graph.vertices], 0.0

    two_m = 2.0 * graph.total_weight
    deg = graph.degrees()

    # Community state: representative id -> members / summed degree.
    members: dict[str, set[str]] = {v: {v} for v in graph.vertices}
    comm_deg: dict[str, float] = {v: deg[v] for v in graph.vertices}
    # Between-community weights, keyed by representative pair (sorted).
    between: dict[tuple[str, str], float] = {}
    for (u, v), w in graph.edges.items():
        between[_edge_key(u, v)] = w

    while True:
        best_gain = 0.0
        best_pair: tuple[str, str] | None = None
        for (a, b), w in between.items():
            gain = 2.0 * (w / two_m - (comm_deg[a] / two_m) * (comm_deg[b] / two_m))
            if gain > best_gain or (
                gain == best_gain and best_pair is not None and (a, b) < best_pair
            ):
                if gain > 0.0:
                    best_gain = gain
                    best_pair = (a, b)
        if best_pair is None:
            break
        a, b = best_pair  # a < b; the merged community keeps representative a
        members[a] |= members.pop(b)
        comm_deg[a] += comm_deg.pop(b)
        merged: dict[tuple[str, str], float] = {}
        for (x, y), w in between.items():
            x = a if x == b else x
            y = a if y == b else y
            if x == y:
                continue
            key = _edge_key(x, y)
            merged[key] = merged.get(key, 0.0) + w
        between = merged

    partition = sorted(
        (frozenset(m) for m in members.values()), key=lambda g: min(g)
    )
    q = modularity(graph, partition)
    return partition, q
