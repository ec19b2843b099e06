"""Parameter and FLOP accounting for a staged network.

A network is three stage DAGs between a conv stem and a classifier
head. Every node is a separable conv unit, every interior arc carries
an aggregation weight, so removing edges shrinks both counts and the
compression ratio and theoretical speedup fall out as exact ratios.
"""

from curvprune import (
    GeneratorConfig,
    build_staged_network,
    compression_ratio,
    count_complexity,
    prune_network,
    rank_edges,
    select_victims,
    theoretical_speedup,
)

config = GeneratorConfig(kind="ER", n=32, p=0.2)
net = build_staged_network(config, seed=3)
base = count_complexity(net.dags)

print("stage breakdown (baseline):")
for stage in base.stages:
    print(f"  {stage.name:10s} {stage.parameters:9,d} params  {stage.flops:13,d} flops")
print(f"  {'total':10s} {base.parameters:9,d} params  {base.flops:13,d} flops")

# prune the least significant half of each stage by Forman curvature
victims = [
    select_victims(rank_edges(g, "FRC"), 50) for g in net.graphs
]
pruned = prune_network(net, victims)
after = count_complexity(pruned.dags)

print("\nafter removing 50% of stage edges by FRC:")
print(f"  parameters {base.parameters:,d} -> {after.parameters:,d}")
print(f"  flops      {base.flops:,d} -> {after.flops:,d}")
print(f"  compression ratio   {compression_ratio(base, after):.3f}")
print(f"  theoretical speedup {theoretical_speedup(base, after):.3f}")

# connectivity repair keeps every stage a working DAG, so the counts
# stay well defined at any pruning fraction
print("\nstages still span input to output:",
      all(dag.in_feeds and dag.out_drains for dag in pruned.dags))
