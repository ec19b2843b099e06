"""Seeded random graphs and their DAG form.

Three generator families build the hidden-stage wiring. Every generator
is a pure function of its config (seed included), and each undirected
graph becomes a stage DAG by orienting edges from lower to higher index
and attaching virtual input/output nodes.
"""

from curvprune import GeneratorConfig, generate, to_dag, topological_order

er = generate(GeneratorConfig(kind="ER", n=32, p=0.2, seed=3))
ws = generate(GeneratorConfig(kind="WS", n=32, k=4, p=0.75, seed=3))
ba = generate(GeneratorConfig(kind="BA", n=32, m=5, seed=3))

print("edge counts at n=32:")
for name, g in (("ER p=0.2", er), ("WS k=4 p=0.75", ws), ("BA m=5", ba)):
    degrees = sorted(g.degree(v) for v in g.nodes)
    print(f"  {name:14s} {g.edge_count:3d} edges, degree range {degrees[0]}..{degrees[-1]}")

# WS rewires but never adds or removes, so the count is always n*k/2;
# BA attachment gives exactly m*(n-m)
print("WS edges == n*k/2:", ws.edge_count == 32 * 4 // 2)
print("BA edges == m*(n-m):", ba.edge_count == 5 * (32 - 5))

# same config, same graph
again = generate(GeneratorConfig(kind="ER", n=32, p=0.2, seed=3))
print("regeneration is exact:", again.edges == er.edges)

# the DAG orientation: every arc points to a higher index, virtual IO
# nodes feed the sources and drain the sinks
dag = to_dag(er)
print("arcs ascend:", all(u < v for u, v in dag.edges))
print("virtual input feeds", len(dag.in_feeds), "sources;",
      "virtual output drains", len(dag.out_drains), "sinks")
order = topological_order(dag)
print("topological order starts", order[:5], "ends", order[-3:])
