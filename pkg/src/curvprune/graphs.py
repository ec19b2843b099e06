"""Random graph generation and stage-DAG construction.

Three classical generator families are implemented from scratch so their
sampling order is pinned down exactly: Gilbert/Erdos-Renyi G(n, p),
Watts-Strogatz rewired ring lattices, and Barabasi-Albert preferential
attachment. All randomness flows through a PCG64 stream seeded per call,
which makes a (config, seed) pair reproduce the same edge set byte for
byte on every run.

Undirected graphs are turned into stage DAGs by orienting each edge from
its lower to its higher label; a virtual source feeds every node without
an in-edge and a virtual sink drains every node without an out-edge.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, ContractError

__all__ = [
    "Edge",
    "GeneratorConfig",
    "UndirectedGraph",
    "StageDag",
    "generate_er",
    "generate_ws",
    "generate_ba",
    "generate",
    "to_dag",
    "remove_edges",
    "repair_connectivity",
    "all_pairs_shortest_paths",
    "topological_order",
]

Edge = tuple[int, int]

GENERATOR_KINDS = ("ER", "WS", "BA")


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ContractError(f"self-loop ({u}, {v}) is not a valid edge")
    return (u, v) if u < v else (v, u)


def _rng(seed: int) -> np.random.Generator:
    # PCG64 is the one generator used everywhere in this package.
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of one random-graph family.

    kind is one of "ER", "WS", "BA"; only the parameters that family uses
    may be set (p for ER, k and p for WS, m for BA).
    """

    kind: str
    n: int
    p: float | None = None
    k: int | None = None
    m: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ConfigurationError(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise ConfigurationError(f"need at least 2 nodes, got n={self.n}")
        needed = {"ER": ("p",), "WS": ("k", "p"), "BA": ("m",)}[self.kind]
        for name in ("p", "k", "m"):
            have = getattr(self, name) is not None
            if name in needed and not have:
                raise ConfigurationError(f"{self.kind} requires parameter {name!r}")
            if name not in needed and have:
                raise ConfigurationError(f"{self.kind} does not take parameter {name!r}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"p must lie in [0, 1], got {self.p}")
        if self.k is not None and (self.k <= 0 or self.k % 2 != 0 or self.k >= self.n):
            raise ConfigurationError(f"k must be even with 0 < k < n, got k={self.k}, n={self.n}")
        if self.m is not None and not 1 <= self.m < self.n:
            raise ConfigurationError(f"m must satisfy 1 <= m < n, got m={self.m}, n={self.n}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "seed": self.seed}
        for name in ("p", "k", "m"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    @staticmethod
    def from_dict(d: Mapping) -> "GeneratorConfig":
        allowed = {"kind", "n", "p", "k", "m", "seed"}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigurationError(f"unknown generator fields: {sorted(unknown)}")
        if "kind" not in d or "n" not in d:
            raise ConfigurationError("generator config needs at least 'kind' and 'n'")
        return GeneratorConfig(
            kind=str(d["kind"]).upper(),
            n=int(d["n"]),
            p=None if d.get("p") is None else float(d["p"]),
            k=None if d.get("k") is None else int(d["k"]),
            m=None if d.get("m") is None else int(d["m"]),
            seed=int(d.get("seed", 0)),
        )


@dataclass(frozen=True)
class UndirectedGraph:
    """A simple undirected graph over integer labels.

    nodes and edges are stored sorted, so two graphs with the same content
    compare equal and serialize identically. Derived graphs (after edge
    removal) may have non-contiguous labels; freshly generated graphs are
    always labeled 0..n-1.
    """

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    provenance: dict = field(default_factory=dict)

    @staticmethod
    def build(nodes: Iterable[int], edges: Iterable[Edge], provenance: dict | None = None) -> "UndirectedGraph":
        node_t = tuple(sorted(set(int(v) for v in nodes)))
        node_set = set(node_t)
        edge_t = tuple(sorted(set(_norm_edge(int(u), int(v)) for u, v in edges)))
        for u, v in edge_t:
            if u not in node_set or v not in node_set:
                raise ContractError(f"edge ({u}, {v}) has an endpoint outside the node set")
        return UndirectedGraph(node_t, edge_t, provenance or {})

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(nbrs)) for v, nbrs in adj.items()}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in set(self.edges)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    # -- file format -----------------------------------------------------

    def to_json_bytes(self) -> bytes:
        """Serialize to the graph file schema: {"n", "edges", "provenance"}.

        Only label-complete graphs (nodes exactly 0..n-1) use this format;
        derived graphs live inside experiment reports instead.
        """
        from .jsonio import canonical_bytes

        n = len(self.nodes)
        if self.nodes != tuple(range(n)):
            raise ContractError("graph file schema requires nodes labeled 0..n-1")
        return canonical_bytes({
            "n": n,
            "edges": [list(e) for e in self.edges],
            "provenance": self.provenance,
        })

    @staticmethod
    def from_json_bytes(data: bytes | str) -> "UndirectedGraph":
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"not valid graph JSON: {exc}") from exc
        if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
            raise ConfigurationError("graph JSON must be an object with 'n' and 'edges'")
        n = int(obj["n"])
        return UndirectedGraph.build(range(n), [tuple(e) for e in obj["edges"]], obj.get("provenance") or {})


# -- generators ----------------------------------------------------------


def generate_er(n: int, p: float, seed: int) -> UndirectedGraph:
    """G(n, p): every unordered pair gets an edge independently with prob p.

    Pairs are visited in lexicographic order with one uniform draw each.
    """
    cfg = GeneratorConfig("ER", n, p=p, seed=seed)
    rng = _rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    draws = rng.random(len(pairs))
    edges = tuple(pair for pair, x in zip(pairs, draws) if x < p)
    return UndirectedGraph(tuple(range(n)), edges, cfg.to_dict())


def generate_ws(n: int, k: int, p: float, seed: int) -> UndirectedGraph:
    """Watts-Strogatz: ring lattice with k/2 neighbors per side, then rewiring.

    Lattice edges are visited in canonical order (ring distance outer,
    node inner). A rewired edge keeps its near endpoint and resamples the
    far one uniformly until it is neither a self-loop nor a duplicate.
    The edge count is n*k/2 on every seed.
    """
    cfg = GeneratorConfig("WS", n, k=k, p=p, seed=seed)
    rng = _rng(seed)
    edge_set: set[Edge] = set()
    for j in range(1, k // 2 + 1):
        for i in range(n):
            edge_set.add(_norm_edge(i, (i + j) % n))
    adjacency_full = n - 1  # a node this saturated cannot be rewired anywhere
    degrees = {v: 0 for v in range(n)}
    for u, v in edge_set:
        degrees[u] += 1
        degrees[v] += 1
    for j in range(1, k // 2 + 1):
        for i in range(n):
            old = _norm_edge(i, (i + j) % n)
            if rng.random() >= p:
                continue
            if degrees[i] >= adjacency_full:
                continue
            while True:
                w = int(rng.integers(0, n))
                if w != i and _norm_edge(i, w) not in edge_set:
                    break
            edge_set.remove(old)
            edge_set.add(_norm_edge(i, w))
            degrees[old[0] + old[1] - i] -= 1
            degrees[w] += 1
    return UndirectedGraph(tuple(range(n)), tuple(sorted(edge_set)), cfg.to_dict())


def generate_ba(n: int, m: int, seed: int) -> UndirectedGraph:
    """Barabasi-Albert: m seed nodes, each arrival attaches to m targets.

    The first arrival connects to all m seeds; later arrivals sample m
    distinct targets degree-proportionally from a repeated-node list.
    The result has exactly m*(n-m) edges.
    """
    cfg = GeneratorConfig("BA", n, m=m, seed=seed)
    rng = _rng(seed)
    edges: list[Edge] = []
    repeated: list[int] = []
    targets: Sequence[int] = range(m)
    for new in range(m, n):
        for t in targets:
            edges.append(_norm_edge(new, t))
        repeated.extend(targets)
        repeated.extend([new] * m)
        if new + 1 < n:
            chosen: set[int] = set()
            while len(chosen) < m:
                chosen.add(repeated[int(rng.integers(0, len(repeated)))])
            targets = sorted(chosen)
    return UndirectedGraph(tuple(range(n)), tuple(sorted(edges)), cfg.to_dict())


def generate(config: GeneratorConfig) -> UndirectedGraph:
    """Dispatch on config.kind."""
    if config.kind == "ER":
        return generate_er(config.n, config.p, config.seed)
    if config.kind == "WS":
        return generate_ws(config.n, config.k, config.p, config.seed)
    return generate_ba(config.n, config.m, config.seed)


# -- stage DAGs ----------------------------------------------------------


@dataclass(frozen=True)
class StageDag:
    """A stage wiring: interior DAG plus virtual source and sink.

    edges hold the oriented interior edges (u, v) with u < v. in_feeds are
    the interior nodes fed by the virtual source, out_drains those that
    drain into the virtual sink.
    """

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    in_feeds: tuple[int, ...]
    out_drains: tuple[int, ...]

    @cached_property
    def predecessors(self) -> dict[int, tuple[int, ...]]:
        pred: dict[int, list[int]] = {v: [] for v in self.nodes}
        for u, v in self.edges:
            pred[v].append(u)
        return {v: tuple(sorted(ps)) for v, ps in pred.items()}

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        succ: dict[int, list[int]] = {v: [] for v in self.nodes}
        for u, v in self.edges:
            succ[u].append(v)
        return {v: tuple(sorted(ss)) for v, ss in succ.items()}

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def to_dag(g: UndirectedGraph) -> StageDag:
    """Orient every edge low -> high and wire the virtual source and sink.

    Nodes without a lower-labeled neighbor are fed by the source; nodes
    without a higher-labeled neighbor drain to the sink. An isolated node
    gets both. The orientation can never produce a cycle.
    """
    edges = tuple(sorted(_norm_edge(u, v) for u, v in g.edges))
    has_in = {v: False for v in g.nodes}
    has_out = {v: False for v in g.nodes}
    for u, v in edges:
        has_out[u] = True
        has_in[v] = True
    in_feeds = tuple(v for v in g.nodes if not has_in[v])
    out_drains = tuple(v for v in g.nodes if not has_out[v])
    return StageDag(g.nodes, edges, in_feeds, out_drains)


def remove_edges(g: UndirectedGraph, victims: Iterable[Edge]) -> UndirectedGraph:
    """Delete a set of edges; nodes left with degree 0 are dropped too."""
    victim_set = {_norm_edge(u, v) for u, v in victims}
    present = set(g.edges)
    missing = victim_set - present
    if missing:
        raise ContractError(f"victims not present in graph: {sorted(missing)[:5]}")
    kept = tuple(e for e in g.edges if e not in victim_set)
    alive = set()
    for u, v in kept:
        alive.add(u)
        alive.add(v)
    nodes = tuple(v for v in g.nodes if v in alive)
    return UndirectedGraph(nodes, kept, {"kind": "derived"})


def repair_connectivity(dag: StageDag) -> StageDag:
    """Give every weakly connected interior component a source link.

    Components are found over the interior edges alone; any component
    with no in_feed member gets a new virtual edge to its lowest label.
    """
    parent = {v: v for v in dag.nodes}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in dag.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    fed_roots = {find(v) for v in dag.in_feeds}
    additions = []
    components: dict[int, int] = {}
    for v in dag.nodes:
        root = find(v)
        if root not in components or v < components[root]:
            components[root] = v
    for root, lowest in sorted(components.items()):
        if root not in fed_roots:
            additions.append(lowest)
    if not additions:
        return dag
    return StageDag(dag.nodes, dag.edges, tuple(sorted(set(dag.in_feeds) | set(additions))), dag.out_drains)


def topological_order(dag: StageDag) -> list[int]:
    """Kahn's algorithm over the interior edges; raises on a cycle."""
    indeg = {v: 0 for v in dag.nodes}
    for _, v in dag.edges:
        indeg[v] += 1
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order: list[int] = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in dag.successors[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    if len(order) != len(dag.nodes):
        raise ContractError("interior edges contain a cycle")
    return order


# -- shortest paths ------------------------------------------------------


def all_pairs_shortest_paths(g: UndirectedGraph) -> dict[int, dict[int, float]]:
    """Hop distances between all node pairs; unreachable pairs are math.inf."""
    table: dict[int, dict[int, float]] = {}
    for s in g.nodes:
        dist = {v: math.inf for v in g.nodes}
        dist[s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for w in g.adjacency[u]:
                    if dist[w] == math.inf:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        table[s] = dist
    return table
