"""Edge significance measures and ranking.

Three measures decide which wires matter:

* EBC, shortest-path edge betweenness, accumulated with Brandes' trick.
  Scores are exact rationals (sigma counts stay integers, dependency
  ratios stay Fractions), summed over unordered pairs, unnormalized.
* FRC, the combinatorial Forman curvature 4 - deg(i) - deg(j), plus its
  weighted generalization that reduces to the combinatorial form at unit
  weights.
* ORC, Ollivier curvature 1 - W1(m_i, m_j), where m_v spreads mass
  uniformly over the neighbors of v and ground costs are hop distances.

Significant edges are kept, insignificant edges are pruned first. By
default high betweenness is significant whereas for the curvatures the
most negative edges are the significant ones; the "inverted" direction
flips either convention.
"""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Mapping, Sequence

from .errors import ConfigurationError, ContractError
from .graphs import Edge, UndirectedGraph, all_pairs_shortest_paths
from .transport import CostMatrix, DiscreteMeasure, wasserstein1

__all__ = [
    "MEASURES",
    "DIRECTIONS",
    "EdgeScoreTable",
    "NodeEdgeWeights",
    "ebc",
    "frc",
    "frc_weighted",
    "orc",
    "score_table",
    "rank_edges",
    "ranked_rows",
    "write_scores_csv",
]

MEASURES = ("FRC", "ORC", "EBC")
DIRECTIONS = ("default", "inverted")

SCORE_CSV_HEADER = ("edge_u", "edge_v", "measure", "score", "rank")


@dataclass(frozen=True)
class EdgeScoreTable:
    """One finite score per graph edge, for one measure."""

    measure: str
    scores: tuple[tuple[Edge, Fraction | int | float], ...]

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ContractError(f"unknown measure {self.measure!r}")
        for _, s in self.scores:
            if isinstance(s, float) and not math.isfinite(s):
                raise ContractError("edge scores must be finite")

    def as_dict(self) -> dict[Edge, Fraction | int | float]:
        return dict(self.scores)

    @staticmethod
    def build(measure: str, scores: Mapping[Edge, Fraction | int | float]) -> "EdgeScoreTable":
        return EdgeScoreTable(measure, tuple(sorted(scores.items())))


# -- edge betweenness ------------------------------------------------------


def ebc(g: UndirectedGraph) -> EdgeScoreTable:
    """Brandes edge betweenness over unordered pairs, endpoints included.

    For each source: BFS counts sigma, then dependencies accumulate
    backward; each unordered pair is visited from both endpoints, so the
    totals are halved at the end. Exact rational arithmetic throughout.
    """
    totals: dict[Edge, Fraction] = {e: Fraction(0) for e in g.edges}
    for s in g.nodes:
        stack: list[int] = []
        pred: dict[int, list[int]] = {v: [] for v in g.nodes}
        sigma: dict[int, int] = {v: 0 for v in g.nodes}
        dist: dict[int, int] = {v: -1 for v in g.nodes}
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in g.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    pred[w].append(v)
        delta: dict[int, Fraction] = {v: Fraction(0) for v in g.nodes}
        for w in reversed(stack):
            for v in pred[w]:
                c = Fraction(sigma[v], sigma[w]) * (1 + delta[w])
                totals[(v, w) if v < w else (w, v)] += c
                delta[v] += c
    halved = {e: t / 2 for e, t in totals.items()}
    return EdgeScoreTable.build("EBC", halved)


# -- Forman curvature ------------------------------------------------------


def frc(g: UndirectedGraph, e: Edge) -> int:
    """Combinatorial Forman curvature of an existing edge: 4 - deg(i) - deg(j)."""
    u, v = _require_edge(g, e)
    return 4 - g.degree(u) - g.degree(v)


@dataclass(frozen=True)
class NodeEdgeWeights:
    """Positive node and edge weights for the weighted Forman curvature."""

    node_weights: Mapping[int, float]
    edge_weights: Mapping[Edge, float]

    @staticmethod
    def unit(g: UndirectedGraph) -> "NodeEdgeWeights":
        return NodeEdgeWeights({v: 1.0 for v in g.nodes}, {e: 1.0 for e in g.edges})


def frc_weighted(g: UndirectedGraph, e: Edge, weights: NodeEdgeWeights) -> float:
    """Weighted Forman curvature.

    F(e) = w_e * ( w_i/w_e + w_j/w_e
                   - sum over edges e_i at i except e of w_i / sqrt(w_e * w_{e_i})
                   - sum over edges e_j at j except e of w_j / sqrt(w_e * w_{e_j}) )

    With unit weights every sqrt is exactly 1.0, so the value collapses to
    the combinatorial 4 - deg(i) - deg(j) without rounding error.
    """
    u, v = _require_edge(g, e)
    w_e = _positive(weights.edge_weights[(u, v)], "edge weight")
    w_u = _positive(weights.node_weights[u], "node weight")
    w_v = _positive(weights.node_weights[v], "node weight")
    total = w_u / w_e + w_v / w_e
    for node, w_node in ((u, w_u), (v, w_v)):
        for nbr in g.adjacency[node]:
            other = (node, nbr) if node < nbr else (nbr, node)
            if other == (u, v):
                continue
            w_other = _positive(weights.edge_weights[other], "edge weight")
            total -= w_node / math.sqrt(w_e * w_other)
    return w_e * total


def _positive(w: float, what: str) -> float:
    if not w > 0:
        raise ContractError(f"{what} must be positive, got {w}")
    return float(w)


# -- Ollivier curvature ------------------------------------------------------


def orc(
    g: UndirectedGraph,
    e: Edge,
    dist: Mapping[int, Mapping[int, float]] | None = None,
) -> Fraction:
    """Ollivier curvature O(e) = 1 - W1(m_i, m_j) for an existing edge.

    m_v puts mass 1/deg(v) on each neighbor of v (no mass on v itself);
    transport costs are hop distances in the full graph. Since both
    endpoints have degree >= 1 by edge existence, the measures are always
    well defined, and all their support lies within one component.
    """
    u, v = _require_edge(g, e)
    if dist is None:
        dist = all_pairs_shortest_paths(g)
    mu = DiscreteMeasure.uniform(g.adjacency[u])
    nu = DiscreteMeasure.uniform(g.adjacency[v])
    cost = CostMatrix.from_distances(dist, mu.support, nu.support)
    value, _ = wasserstein1(mu, nu, cost)
    return 1 - value


def _require_edge(g: UndirectedGraph, e: Edge) -> Edge:
    u, v = e
    key = (u, v) if u < v else (v, u)
    if key not in set(g.edges):
        raise ContractError(f"edge {e} is not in the graph")
    return key


# -- tables and ranking ------------------------------------------------------


def score_table(g: UndirectedGraph, measure: str) -> EdgeScoreTable:
    """Score every edge of g under one measure."""
    if measure not in MEASURES:
        raise ConfigurationError(f"unknown measure {measure!r}")
    if measure == "EBC":
        return ebc(g)
    if measure == "FRC":
        return EdgeScoreTable.build("FRC", {e: frc(g, e) for e in g.edges})
    dist = all_pairs_shortest_paths(g)
    return EdgeScoreTable.build("ORC", {e: orc(g, e, dist) for e in g.edges})


def rank_edges(
    g: UndirectedGraph,
    measure: str,
    direction: str = "default",
    table: EdgeScoreTable | None = None,
) -> list[Edge]:
    """Edges ordered most significant first.

    Under "default", EBC ranks descending and the curvatures ascending
    (most negative first). "inverted" flips the score order; ties always
    break toward the lexicographically smaller edge.
    """
    if direction not in DIRECTIONS:
        raise ConfigurationError(f"unknown direction {direction!r}")
    if table is None:
        table = score_table(g, measure)
    elif table.measure != measure:
        raise ContractError("score table measure does not match")
    descending = (measure == "EBC") == (direction == "default")
    if descending:
        return [e for e, _ in sorted(table.scores, key=lambda item: (-item[1], item[0]))]
    return [e for e, _ in sorted(table.scores, key=lambda item: (item[1], item[0]))]


def ranked_rows(table: EdgeScoreTable, ranking: Sequence[Edge]) -> list[tuple[int, int, str, float, int]]:
    scores = table.as_dict()
    if set(scores) != set(ranking):
        raise ContractError("ranking and score table cover different edges")
    return [
        (u, v, table.measure, float(scores[(u, v)]), rank)
        for rank, (u, v) in enumerate(ranking, start=1)
    ]


def write_scores_csv(table: EdgeScoreTable, ranking: Sequence[Edge], fh: IO[str]) -> None:
    """Dump scores in rank order: edge_u,edge_v,measure,score,rank."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SCORE_CSV_HEADER)
    for row in ranked_rows(table, ranking):
        writer.writerow([row[0], row[1], row[2], repr(row[3]), row[4]])
