"""How pruning reshapes the stage graphs.

Removing weak edges concentrates the survivors inside communities:
modularity of the stage graphs goes up while global efficiency (the
mean inverse path length) goes down. This directional shift is the
structural fingerprint the experiments report.
"""

from curvprune import (
    ExperimentConfig,
    GeneratorConfig,
    UndirectedGraph,
    generate,
    global_efficiency,
    greedy_communities,
    modularity,
    run_single_seed,
    structure_report,
)

# community detection on a graph with an obvious split
g = UndirectedGraph.build(
    range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
)
part = greedy_communities(g)
print("communities found:", [sorted(c) for c in part.as_sets()])
print("Q =", modularity(g, part), " efficiency =", global_efficiency(g))

# one bundled report per graph
rep = structure_report(generate(GeneratorConfig(kind="WS", n=32, k=4, p=0.75, seed=7)))
print(f"\nWS stage graph: Q={float(rep.q):.4f}"
      f" efficiency={float(rep.efficiency):.4f}"
      f" communities={rep.num_communities}")

# the shift on a real run: pruned stages are more modular, less efficient
config = ExperimentConfig(
    generator=GeneratorConfig(kind="WS", n=32, k=4, p=0.75),
    measure="ORC",
    seeds=(7,),
)
run = run_single_seed(config, seed=7)
print(f"\nafter pruning at {run.prune.best_fraction}%:")
print(f"  mean Q          {run.structure_base.q_mean:.4f}"
      f" -> {run.structure_pruned.q_mean:.4f}")
print(f"  mean efficiency {run.structure_base.efficiency_mean:.4f}"
      f" -> {run.structure_pruned.efficiency_mean:.4f}")
