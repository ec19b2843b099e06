"""One complete pruning experiment on a single seed.

The binary search halves the candidate interval five times, asking the
evaluator whether accuracy, specificity and sensitivity all survive at
each fraction. With the deterministic surrogate this runs in seconds
and always reproduces byte for byte.
"""

from curvprune import (
    ExperimentConfig,
    GeneratorConfig,
    build_staged_network,
    run_single_seed,
)

config = ExperimentConfig(
    generator=GeneratorConfig(kind="ER", n=32, p=0.2),
    measure="ORC",
    seeds=(3,),
)
run = run_single_seed(config, seed=3)

print("baseline counts:", run.baseline_counts.to_dict())
print("\nsearch trace:")
for entry in run.prune.trace:
    flag = "pass" if entry.passed else "fail"
    print(f"  try {entry.fraction:6.3f}% -> {flag}"
          f"  (accuracy {entry.metrics.accuracy:.3f})")

print(f"\nbest fraction: {run.prune.best_fraction}%")
print(f"parameters {run.complexity_base.parameters:,d}"
      f" -> {run.complexity_pruned.parameters:,d}")
print(f"compression {run.compression:.3f}, speedup {run.speedup:.3f}")

kept = sum(len(edges) for edges in run.prune.retained_edges)
total = sum(g.edge_count for g in build_staged_network(config.generator, 3).graphs)
print(f"edges kept: {kept} of {total}")
