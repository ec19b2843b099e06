"""Staged networks: a generator graph per stage plus the architecture.

Stage graphs come from one generator family with derived seeds
(seed, seed + 1, seed + 2), so the three stages are wired independently
but the whole network reproduces from a single integer. A single-graph
mode reuses one wiring for all stages instead.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .complexity import STAGE_NAMES, ArchitectureSpec
from .errors import ContractError
from .graphs import (
    Edge,
    GeneratorConfig,
    StageDag,
    UndirectedGraph,
    generate,
    remove_edges,
    repair_connectivity,
    to_dag,
)

__all__ = ["StagedNetwork", "build_staged_network", "prune_network"]


@dataclass(frozen=True)
class StagedNetwork:
    graphs: tuple[UndirectedGraph, ...]
    dags: tuple[StageDag, ...]
    arch: ArchitectureSpec

    def __post_init__(self):
        if len(self.graphs) != len(self.dags):
            raise ContractError("graphs and dags must pair up")

    @property
    def stage_count(self) -> int:
        return len(self.graphs)

    def stage_edge_lists(self) -> list[list[list[int]]]:
        """Interior edges per stage, sorted, as plain lists for the wire."""
        return [[list(e) for e in dag.edges] for dag in self.dags]


def build_staged_network(
    config: GeneratorConfig,
    seed: int,
    arch: ArchitectureSpec = ArchitectureSpec(),
    single_graph: bool = False,
) -> StagedNetwork:
    """Three stage graphs from derived seeds seed, seed+1, seed+2.

    With single_graph=True the first stage's wiring is shared by all
    three stages instead.
    """
    n_stages = len(STAGE_NAMES)
    if single_graph:
        g = generate(replace(config, seed=seed))
        graphs = (g,) * n_stages
    else:
        graphs = tuple(generate(replace(config, seed=seed + i)) for i in range(n_stages))
    dags = tuple(repair_connectivity(to_dag(g)) for g in graphs)
    return StagedNetwork(graphs, dags, arch)


def prune_network(net: StagedNetwork, victim_sets: Sequence[frozenset[Edge]]) -> StagedNetwork:
    """Remove victims per stage, drop isolated nodes, rewire and repair."""
    if len(victim_sets) != net.stage_count:
        raise ContractError("one victim set per stage required")
    graphs = []
    dags = []
    for g, victims in zip(net.graphs, victim_sets):
        pruned = remove_edges(g, victims)
        graphs.append(pruned)
        dags.append(repair_connectivity(to_dag(pruned)))
    return StagedNetwork(tuple(graphs), tuple(dags), net.arch)
