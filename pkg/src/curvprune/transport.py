"""Exact Wasserstein-1 between discrete measures on graph nodes.

Masses are rational. Scaling both sides by the least common multiple of
all denominators turns the problem into an integer transportation
instance, which is solved exactly by successive shortest paths with
node potentials. No floats enter the computation, so the optimum comes
back as a Fraction and two runs can never disagree in the last bit.

A tiny brute-force enumerator doubles as the independent oracle for
small instances; it shares nothing with the flow solver but the types.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, DisconnectedSupportError, OracleRefusal

__all__ = [
    "DiscreteMeasure",
    "CostMatrix",
    "TransportPlan",
    "wasserstein1",
    "brute_force_w1",
]


@dataclass(frozen=True)
class DiscreteMeasure:
    """A probability measure with finite support on graph nodes."""

    support: tuple[int, ...]
    mass: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.mass):
            raise ContractError("support and mass lengths differ")
        if not self.support:
            raise ContractError("measure needs nonempty support")
        if len(set(self.support)) != len(self.support):
            raise ContractError("support nodes must be distinct")
        for m in self.mass:
            if not isinstance(m, Fraction) or m <= 0:
                raise ContractError("masses must be positive Fractions")
        if sum(self.mass) != 1:
            raise ContractError(f"masses must sum to 1, got {sum(self.mass)}")

    @staticmethod
    def uniform(nodes: Iterable[int]) -> "DiscreteMeasure":
        support = tuple(sorted(set(int(v) for v in nodes)))
        if not support:
            raise ContractError("uniform measure over empty node set")
        w = Fraction(1, len(support))
        return DiscreteMeasure(support, (w,) * len(support))


@dataclass(frozen=True)
class CostMatrix:
    """Nonnegative integer costs, row i = mu support, column j = nu support."""

    cost: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.cost or not self.cost[0]:
            raise ContractError("cost matrix must be nonempty")
        width = len(self.cost[0])
        for row in self.cost:
            if len(row) != width:
                raise ContractError("cost matrix rows have unequal lengths")
            for c in row:
                if not isinstance(c, int) or c < 0:
                    raise ContractError(f"costs must be nonnegative integers, got {c!r}")

    @staticmethod
    def from_distances(
        dist: Mapping[int, Mapping[int, float]],
        mu_support: Sequence[int],
        nu_support: Sequence[int],
    ) -> "CostMatrix":
        rows = []
        for a in mu_support:
            row = []
            for b in nu_support:
                d = dist[a][b]
                if math.isinf(d):
                    raise DisconnectedSupportError(
                        f"nodes {a} and {b} are in different components"
                    )
                row.append(int(d))
            rows.append(tuple(row))
        return CostMatrix(tuple(rows))


@dataclass(frozen=True)
class TransportPlan:
    """Optimal flow, keyed by (row index, column index) into the supports."""

    flow: tuple[tuple[tuple[int, int], Fraction], ...]

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.flow)

    def marginals(self, nrows: int, ncols: int) -> tuple[list[Fraction], list[Fraction]]:
        row = [Fraction(0)] * nrows
        col = [Fraction(0)] * ncols
        for (i, j), f in self.flow:
            row[i] += f
            col[j] += f
        return row, col


def _scaled_masses(mu: DiscreteMeasure, nu: DiscreteMeasure) -> tuple[int, list[int], list[int]]:
    scale = 1
    for m in (*mu.mass, *nu.mass):
        scale = math.lcm(scale, m.denominator)
    supplies = [int(m * scale) for m in mu.mass]
    demands = [int(m * scale) for m in nu.mass]
    return scale, supplies, demands


def wasserstein1(
    mu: DiscreteMeasure, nu: DiscreteMeasure, cost: CostMatrix
) -> tuple[Fraction, TransportPlan]:
    """Exact W1(mu, nu) under the given integer ground costs.

    Returns the optimal value and one optimal plan. The value is bounded
    by max cost over the support product; symmetry W1(mu, nu) ==
    W1(nu, mu) holds because transposing the instance transposes the plan.
    """
    a, b = len(mu.support), len(nu.support)
    if len(cost.cost) != a or len(cost.cost[0]) != b:
        raise ContractError(
            f"cost matrix shape {len(cost.cost)}x{len(cost.cost[0])} does not match supports {a}x{b}"
        )
    scale, supplies, demands = _scaled_masses(mu, nu)
    flows, total = _min_cost_transport(supplies, demands, cost.cost)
    plan = tuple(
        ((i, j), Fraction(f, scale))
        for (i, j), f in sorted(flows.items())
        if f
    )
    return Fraction(total, scale), TransportPlan(plan)


def _min_cost_transport(
    supplies: Sequence[int], demands: Sequence[int], cost: Sequence[Sequence[int]]
) -> tuple[dict[tuple[int, int], int], int]:
    """Integer min-cost transportation via successive shortest paths.

    Node layout: 0 = source, 1..a = supply rows, a+1..a+b = demand
    columns, a+b+1 = sink. Dijkstra runs on reduced costs kept
    nonnegative by Johnson potentials, all in exact integer arithmetic.
    """
    a, b = len(supplies), len(demands)
    total_units = sum(supplies)
    if total_units != sum(demands):
        raise ContractError("scaled supply and demand totals differ")
    n_nodes = a + b + 2
    source, sink = 0, a + b + 1

    arc_to: list[int] = []
    arc_cap: list[int] = []
    arc_cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n_nodes)]

    def add_arc(u: int, v: int, cap: int, c: int) -> None:
        adj[u].append(len(arc_to))
        arc_to.append(v)
        arc_cap.append(cap)
        arc_cost.append(c)
        adj[v].append(len(arc_to))
        arc_to.append(u)
        arc_cap.append(0)
        arc_cost.append(-c)

    for i, s in enumerate(supplies):
        add_arc(source, 1 + i, s, 0)
    row_arc_base = len(arc_to)
    for i in range(a):
        for j in range(b):
            add_arc(1 + i, 1 + a + j, total_units, cost[i][j])
    for j, d in enumerate(demands):
        add_arc(1 + a + j, sink, d, 0)

    potential = [0] * n_nodes
    pushed = 0
    total_cost = 0
    inf = math.inf
    while pushed < total_units:
        dist = [inf] * n_nodes
        in_arc = [-1] * n_nodes
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for idx in adj[u]:
                if arc_cap[idx] <= 0:
                    continue
                v = arc_to[idx]
                nd = d + arc_cost[idx] + potential[u] - potential[v]
                if nd < dist[v]:
                    dist[v] = nd
                    in_arc[v] = idx
                    heapq.heappush(heap, (nd, v))
        if dist[sink] == inf:
            raise ContractError("transportation instance is infeasible")
        for v in range(n_nodes):
            if dist[v] != inf:
                potential[v] += dist[v]
        # bottleneck along the augmenting path
        push = total_units - pushed
        v = sink
        while v != source:
            idx = in_arc[v]
            push = min(push, arc_cap[idx])
            v = arc_to[idx ^ 1]
        v = sink
        while v != source:
            idx = in_arc[v]
            arc_cap[idx] -= push
            arc_cap[idx ^ 1] += push
            total_cost += push * arc_cost[idx]
            v = arc_to[idx ^ 1]
        pushed += push

    flows: dict[tuple[int, int], int] = {}
    idx = row_arc_base
    for i in range(a):
        for j in range(b):
            f = arc_cap[idx ^ 1]  # reverse capacity equals shipped units
            if f:
                flows[(i, j)] = f
            idx += 2
    return flows, total_cost


# -- brute force oracle ----------------------------------------------------

ORACLE_MAX_SUPPORT = 4
ORACLE_MAX_UNITS = 24


def brute_force_w1(mu: DiscreteMeasure, nu: DiscreteMeasure, cost: CostMatrix) -> Fraction:
    """Enumerate every integral transport plan and take the cheapest.

    Refuses instances whose scaled totals exceed ORACLE_MAX_UNITS or whose
    supports exceed ORACLE_MAX_SUPPORT nodes; within those bounds full
    enumeration stays tiny. Used to cross-check the flow solver.
    """
    a, b = len(mu.support), len(nu.support)
    if a > ORACLE_MAX_SUPPORT or b > ORACLE_MAX_SUPPORT:
        raise OracleRefusal(f"oracle handles supports up to {ORACLE_MAX_SUPPORT}, got {a}x{b}")
    if len(cost.cost) != a or len(cost.cost[0]) != b:
        raise ContractError("cost matrix shape does not match supports")
    scale, supplies, demands = _scaled_masses(mu, nu)
    if scale > ORACLE_MAX_UNITS:
        raise OracleRefusal(f"oracle handles totals up to {ORACLE_MAX_UNITS} units, got {scale}")

    best = math.inf

    def fill(row: int, remaining_cols: list[int], acc: int) -> None:
        nonlocal best
        if acc >= best:
            return
        if row == a:
            if all(r == 0 for r in remaining_cols):
                best = acc
            return
        supply = supplies[row]

        def split(col: int, left: int, cost_so_far: int) -> None:
            nonlocal best
            if acc + cost_so_far >= best:
                return
            if col == b - 1:
                if left <= remaining_cols[col]:
                    remaining_cols[col] -= left
                    fill(row + 1, remaining_cols, acc + cost_so_far + left * cost.cost[row][col])
                    remaining_cols[col] += left
                return
            for units in range(min(left, remaining_cols[col]) + 1):
                remaining_cols[col] -= units
                split(col + 1, left - units, cost_so_far + units * cost.cost[row][col])
                remaining_cols[col] += units

        split(0, supply, 0)

    fill(0, list(demands), 0)
    if best is math.inf:
        raise ContractError("no feasible plan (marginals inconsistent)")
    return Fraction(int(best), scale)
