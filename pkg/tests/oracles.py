"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: path enumeration instead of
Brandes, exhaustive partition search instead of greedy agglomeration,
plain BFS tables instead of the library's graph classes. Slow is fine;
these only ever run on graphs with at most eight nodes.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations

Edge = tuple[int, int]


def _adjacency(nodes, edges) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return {v: sorted(nbrs) for v, nbrs in adj.items()}


def bfs_distances(nodes, edges, source) -> dict[int, int]:
    """Hop distances from source; unreachable nodes are absent."""
    adj = _adjacency(nodes, edges)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def efficiency_from_edges(nodes, edges) -> Fraction:
    """Mean inverse distance over ordered pairs; disconnected pairs add 0."""
    nodes = sorted(nodes)
    n = len(nodes)
    if n < 2:
        raise ValueError("efficiency needs at least two nodes")
    total = Fraction(0)
    for s in nodes:
        dist = bfs_distances(nodes, edges, s)
        for t in nodes:
            if t != s and t in dist:
                total += Fraction(1, dist[t])
    return total / (n * (n - 1))


def all_shortest_paths(nodes, edges, s, t) -> list[list[int]]:
    """Every shortest s-t path as a node sequence; empty if disconnected."""
    adj = _adjacency(nodes, edges)
    dist = bfs_distances(nodes, edges, s)
    if t not in dist:
        return []
    # walk backwards from t along strictly decreasing distance
    paths: list[list[int]] = []

    def extend(prefix: list[int]) -> None:
        head = prefix[-1]
        if head == s:
            paths.append(prefix[::-1])
            return
        for w in adj[head]:
            if w in dist and dist[w] == dist[head] - 1:
                extend(prefix + [w])

    extend([t])
    return paths


def brute_force_ebc(nodes, edges) -> dict[Edge, Fraction]:
    """Edge betweenness by enumerating every shortest path of every pair."""
    totals: dict[Edge, Fraction] = {
        (min(u, v), max(u, v)): Fraction(0) for u, v in edges
    }
    for s, t in combinations(sorted(nodes), 2):
        paths = all_shortest_paths(nodes, edges, s, t)
        if not paths:
            continue
        share = Fraction(1, len(paths))
        for path in paths:
            for u, v in zip(path, path[1:]):
                totals[(min(u, v), max(u, v))] += share
    return totals


def pair_path_counts(nodes, edges, s, t):
    """(distance, sigma, {edge: sigma_through}) for one pair, by BFS counting.

    sigma counts shortest s-t paths; sigma_through[e] counts those using
    edge e, via the product of partial counts from both endpoints. This
    is a second route independent of all_shortest_paths.
    """
    adj = _adjacency(nodes, edges)
    dist_s = bfs_distances(nodes, edges, s)
    if t not in dist_s:
        return None, 0, {}
    dist_t = bfs_distances(nodes, edges, t)
    d = dist_s[t]

    def counts(dist):
        sigma = {v: 0 for v in dist}
        for v in sorted(dist, key=dist.get):
            if dist[v] == 0:
                sigma[v] = 1
            else:
                sigma[v] = sum(
                    sigma[w]
                    for w in adj[v]
                    if w in dist and dist[w] == dist[v] - 1
                )
        return sigma

    sigma_s = counts(dist_s)
    sigma_t = counts(dist_t)
    through: dict[Edge, int] = {}
    for u, v in edges:
        c = 0
        for a, b in ((u, v), (v, u)):
            if (
                a in dist_s and b in dist_t
                and dist_s[a] + 1 + dist_t[b] == d
            ):
                c += sigma_s[a] * sigma_t[b]
        through[(min(u, v), max(u, v))] = c
    return d, sigma_s[t], through


def set_partitions(items: list[int]):
    """Every partition of items into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [partial[i] + [first]] + partial[i + 1:]
        yield [[first]] + partial


def modularity_of_partition(nodes, edges, blocks) -> Fraction:
    """Q for an explicit partition, straight from the definition."""
    m = len(edges)
    if m == 0:
        raise ValueError("modularity needs at least one edge")
    degree = {v: 0 for v in nodes}
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    q = Fraction(0)
    for block in blocks:
        block_set = set(block)
        intra = sum(1 for u, v in edges if u in block_set and v in block_set)
        dsum = sum(degree[v] for v in block)
        q += Fraction(intra, m) - Fraction(dsum, 2 * m) ** 2
    return q


def exhaustive_best_modularity(nodes, edges) -> Fraction:
    """Maximum Q over every partition; only feasible for tiny graphs.

    Comparisons run on the integer numerators of 4*m^2*Q so no Fraction
    churn happens inside the loop over thousands of partitions.
    """
    nodes = sorted(nodes)
    if len(nodes) > 8:
        raise ValueError("exhaustive search is reserved for <= 8 nodes")
    m = len(edges)
    if m == 0:
        raise ValueError("modularity needs at least one edge")
    degree = {v: 0 for v in nodes}
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    edge_list = [(min(u, v), max(u, v)) for u, v in edges]
    best_scaled = None
    for blocks in set_partitions(nodes):
        scaled = 0
        for block in blocks:
            block_set = set(block)
            intra = sum(1 for u, v in edge_list if u in block_set and v in block_set)
            dsum = sum(degree[v] for v in block)
            scaled += 4 * m * intra - dsum * dsum
        if best_scaled is None or scaled > best_scaled:
            best_scaled = scaled
    return Fraction(best_scaled, 4 * m * m)
