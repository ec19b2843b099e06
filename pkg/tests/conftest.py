"""Shared fixtures: canonical small graphs and a seeded random family."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from curvprune import UndirectedGraph

FAMILY_SEED = 98117
FAMILY_SIZE = 220

# acceptance tests append one verdict line per criterion; printed at the end
ACCEPTANCE_LINES = pytest.StashKey()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, None)
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def build_graph(n: int, edges) -> UndirectedGraph:
    return UndirectedGraph.build(range(n), edges)


def _connected(n: int, edges) -> bool:
    if n == 0:
        return False
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def random_connected_family(count: int = FAMILY_SIZE, seed: int = FAMILY_SEED):
    """Deterministic list of connected graphs with 4..8 nodes.

    Edge probabilities cycle through sparse and moderate settings so the
    family mixes tree-like graphs with denser ones while keeping plenty
    of low-degree edges.
    """
    rng = random.Random(seed)
    family = []
    densities = (0.3, 0.4, 0.5, 0.65)
    while len(family) < count:
        n = rng.randint(4, 8)
        p = densities[len(family) % len(densities)]
        edges = [e for e in combinations(range(n), 2) if rng.random() < p]
        if _connected(n, edges):
            family.append(build_graph(n, edges))
    return family


CANONICAL = {
    "triangle": build_graph(3, [(0, 1), (1, 2), (0, 2)]),
    "path3": build_graph(3, [(0, 1), (1, 2)]),
    "cycle4": build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    "star4": build_graph(4, [(0, 1), (0, 2), (0, 3)]),
    "complete4": build_graph(4, list(combinations(range(4), 2))),
    "complete5": build_graph(5, list(combinations(range(5), 2))),
    # two triangles joined by the bridge (2, 3)
    "triangle_bridge": build_graph(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
    ),
    # two disjoint triangles
    "two_triangles": build_graph(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    ),
}


@pytest.fixture(scope="session")
def graph_family():
    return random_connected_family()


@pytest.fixture(scope="session")
def canonical_graphs():
    return CANONICAL
