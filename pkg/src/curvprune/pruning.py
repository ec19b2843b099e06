"""Binary-search pruning and end-to-end experiments.

The search looks for the largest prune fraction whose retrained network
still matches the unpruned baseline on accuracy, specificity and
sensitivity simultaneously. Edges are ranked once on the original stage
graphs (so victim sets at increasing fractions are nested), the fraction
is bisected over [0, 100] for a fixed number of evaluations, and every
evaluation sends the same init seed so the trainer rewinds to identical
starting weights. Comparisons against the baseline use exact rational
arithmetic on confusion counts; no tolerance is involved.

An experiment wires the whole pipeline together per seed: generate stage
graphs, evaluate the unpruned baseline, rank edges under one measure,
run the search, then report complexity and structure before and after.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Mapping, Sequence

from .complexity import (
    ArchitectureSpec,
    ComplexityReport,
    CostModel,
    compression_ratio,
    count_complexity,
    theoretical_speedup,
)
from .errors import ConfigurationError, ContractError, EvaluationError
from .evaluators import (
    Evaluator,
    ExternalEvaluator,
    ExternalEvaluatorConfig,
    SurrogateEvaluator,
    SurrogateParams,
)
from .graphs import Edge, GeneratorConfig
from .jsonio import canonical_bytes
from .measures import DIRECTIONS, MEASURES, rank_edges
from .metrics import ConfusionCounts, PerformanceMetrics, auc_roc, metrics_from_confusion
from .network import StagedNetwork, build_staged_network, prune_network
from .structure import global_efficiency, greedy_communities, modularity

__all__ = [
    "select_victims",
    "BaselineScores",
    "TraceEntry",
    "PruneResult",
    "binary_search_prune",
    "ExperimentConfig",
    "RunRecord",
    "ExperimentReport",
    "run_experiment",
    "REPORT_CSV_HEADER",
]

REPORT_CSV_HEADER = (
    "class", "seed", "measure", "best_fraction",
    "params_base", "params_pruned", "compression",
    "flops_base", "flops_pruned", "speedup",
    "Q_base", "Q_pruned", "eff_base", "eff_pruned",
)


def select_victims(ranking: Sequence[Edge], fraction: float | Fraction) -> frozenset[Edge]:
    """The floor(fraction% of |E|) least significant edges of a ranking.

    The ranking lists edges most significant first, so victims come off
    the tail. Fractions visited by the search are dyadic, hence exact,
    and nested fractions give nested victim sets.
    """
    frac = Fraction(fraction)
    if not 0 <= frac <= 100:
        raise ContractError(f"fraction must lie in [0, 100], got {fraction}")
    k = int(frac * len(ranking) // 100)
    if k == 0:
        return frozenset()
    return frozenset(ranking[-k:])


@dataclass(frozen=True)
class BaselineScores:
    """Exact percentage targets a pruned candidate must meet or beat."""

    accuracy: Fraction
    specificity: Fraction
    sensitivity: Fraction
    counts: ConfusionCounts | None = None

    @staticmethod
    def from_counts(counts: ConfusionCounts) -> "BaselineScores":
        return BaselineScores(
            accuracy=counts.accuracy_exact(),
            specificity=counts.specificity_exact(),
            sensitivity=counts.sensitivity_exact(),
            counts=counts,
        )

    def met_by(self, counts: ConfusionCounts) -> bool:
        return (
            counts.accuracy_exact() >= self.accuracy
            and counts.specificity_exact() >= self.specificity
            and counts.sensitivity_exact() >= self.sensitivity
        )


@dataclass(frozen=True)
class TraceEntry:
    fraction: float
    passed: bool
    counts: ConfusionCounts
    metrics: PerformanceMetrics

    def to_dict(self) -> dict:
        return {
            "fraction": self.fraction,
            "passed": self.passed,
            "counts": self.counts.to_dict(),
            "metrics": self.metrics.to_dict(),
        }


@dataclass(frozen=True)
class PruneResult:
    best_fraction: float
    best_counts: ConfusionCounts | None
    best_metrics: PerformanceMetrics
    retained_edges: tuple[tuple[Edge, ...], ...]
    trace: tuple[TraceEntry, ...]

    def to_dict(self) -> dict:
        return {
            "best_fraction": self.best_fraction,
            "best_counts": self.best_counts.to_dict() if self.best_counts else None,
            "best_metrics": self.best_metrics.to_dict(),
            "retained_edges": [[list(e) for e in stage] for stage in self.retained_edges],
            "trace": [t.to_dict() for t in self.trace],
        }


def binary_search_prune(
    net: StagedNetwork,
    measure: str,
    evaluator: Evaluator,
    baseline: BaselineScores,
    *,
    direction: str = "default",
    depth: int = 5,
    init_seed: int = 0,
    rankings: Sequence[Sequence[Edge]] | None = None,
) -> PruneResult:
    """Bisect the prune fraction for exactly ``depth`` evaluations.

    Start at (0, 100); each round prunes (lo+hi)/2 percent of every
    stage's edges, retrains from the rewound init seed, and keeps the
    candidate when it meets the baseline on all three metrics, moving lo
    up on success and hi down on failure. The unpruned configuration is
    the fallback when nothing ever passes.
    """
    if depth < 1:
        raise ContractError("depth must be at least 1")
    if rankings is None:
        rankings = [rank_edges(g, measure, direction) for g in net.graphs]
    elif len(rankings) != net.stage_count:
        raise ContractError("one ranking per stage required")

    base_metrics = metrics_from_confusion(baseline.counts) if baseline.counts else None
    best = PruneResult(
        best_fraction=0.0,
        best_counts=baseline.counts,
        best_metrics=base_metrics
        or PerformanceMetrics(
            float(baseline.accuracy), float(baseline.specificity),
            float(baseline.sensitivity), None, None,
        ),
        retained_edges=tuple(g.edges for g in net.graphs),
        trace=(),
    )
    trace: list[TraceEntry] = []
    lo, hi = 0.0, 100.0
    for _ in range(depth):
        fraction = (lo + hi) / 2
        victims = [select_victims(r, fraction) for r in rankings]
        candidate = prune_network(net, victims)
        try:
            response = evaluator.evaluate(candidate, init_seed)
        except EvaluationError as exc:
            exc.trace = [t.to_dict() for t in trace]
            raise
        counts = response.counts
        auc = auc_roc(response.scores) if response.scores else None
        passed = baseline.met_by(counts)
        trace.append(TraceEntry(fraction, passed, counts, metrics_from_confusion(counts, auc)))
        if passed:
            lo = fraction
            best = PruneResult(
                best_fraction=fraction,
                best_counts=counts,
                best_metrics=trace[-1].metrics,
                retained_edges=tuple(g.edges for g in candidate.graphs),
                trace=(),
            )
        else:
            hi = fraction
    return PruneResult(
        best_fraction=best.best_fraction,
        best_counts=best.best_counts,
        best_metrics=best.best_metrics,
        retained_edges=best.retained_edges,
        trace=tuple(trace),
    )


# -- experiment configuration -------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one batch needs; validates before any work happens."""

    generator: GeneratorConfig
    measure: str
    seeds: tuple[int, ...]
    direction: str = "default"
    depth: int = 5
    single_graph: bool = False
    arch: ArchitectureSpec = ArchitectureSpec()
    cost_model: CostModel = CostModel()
    evaluator_kind: str = "surrogate"
    surrogate: SurrogateParams = SurrogateParams()
    external: ExternalEvaluatorConfig | None = None

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ConfigurationError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        if self.direction not in DIRECTIONS:
            raise ConfigurationError(f"direction must be one of {DIRECTIONS}")
        if not self.seeds:
            raise ConfigurationError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigurationError("seeds must be distinct")
        if self.depth < 1:
            raise ConfigurationError("depth must be at least 1")
        if self.evaluator_kind not in ("surrogate", "external"):
            raise ConfigurationError(f"unknown evaluator kind {self.evaluator_kind!r}")
        if self.evaluator_kind == "external" and self.external is None:
            raise ConfigurationError("external evaluator needs a command")

    @staticmethod
    def from_dict(d: Mapping) -> "ExperimentConfig":
        if not isinstance(d, Mapping):
            raise ConfigurationError("experiment config must be a JSON object")
        allowed = {"generator", "measure", "direction", "evaluator", "seeds",
                   "depth", "single_graph", "arch"}
        unknown = set(d) - allowed
        if unknown:
            raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
        for req in ("generator", "measure", "seeds"):
            if req not in d:
                raise ConfigurationError(f"config field {req!r} is required")
        gen_dict = dict(d["generator"])
        gen_dict.setdefault("seed", 0)
        generator = GeneratorConfig.from_dict(gen_dict)
        arch = ArchitectureSpec.from_dict(d.get("arch", {}))
        ev = dict(d.get("evaluator", {"kind": "surrogate"}))
        kind = ev.pop("kind", "surrogate")
        surrogate = SurrogateParams()
        external = None
        if kind == "surrogate":
            base = ev.pop("base_counts", None)
            surrogate = SurrogateParams.build(
                tau=ev.pop("tau", "0.6"),
                lam=ev.pop("lambda", 200),
                base_counts=ConfusionCounts.from_dict(base) if base else SurrogateParams().base_counts,
            )
        elif kind == "external":
            cmd = ev.pop("cmd", None)
            if not cmd:
                raise ConfigurationError("external evaluator config needs 'cmd'")
            external = ExternalEvaluatorConfig(
                cmd=tuple(str(part) for part in cmd),
                timeout=float(ev.pop("timeout", 600.0)),
                epochs=int(ev.pop("epochs", 100)),
            )
        else:
            raise ConfigurationError(f"unknown evaluator kind {kind!r}")
        if ev:
            raise ConfigurationError(f"unknown evaluator fields: {sorted(ev)}")
        try:
            seeds = tuple(int(s) for s in d["seeds"])
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"seeds must be integers: {exc}") from exc
        return ExperimentConfig(
            generator=generator,
            measure=str(d["measure"]).upper(),
            seeds=seeds,
            direction=str(d.get("direction", "default")),
            depth=int(d.get("depth", 5)),
            single_graph=bool(d.get("single_graph", False)),
            arch=arch,
            evaluator_kind=kind,
            surrogate=surrogate,
            external=external,
        )

    def to_dict(self) -> dict:
        ev: dict = {"kind": self.evaluator_kind}
        if self.evaluator_kind == "surrogate":
            ev["tau"] = float(self.surrogate.tau)
            ev["lambda"] = self.surrogate.lam
            ev["base_counts"] = self.surrogate.base_counts.to_dict()
        else:
            ev["cmd"] = list(self.external.cmd)
            ev["timeout"] = self.external.timeout
            ev["epochs"] = self.external.epochs
        gen = self.generator.to_dict()
        gen.pop("seed", None)  # per-run seeds live in "seeds"
        return {
            "generator": gen,
            "measure": self.measure,
            "direction": self.direction,
            "evaluator": ev,
            "seeds": list(self.seeds),
            "depth": self.depth,
            "single_graph": self.single_graph,
            "arch": self.arch.to_dict(),
        }


# -- per-seed run and whole-batch report --------------------------------------


@dataclass(frozen=True)
class StageStructure:
    q: float | None
    efficiency: float
    num_communities: int | None

    def to_dict(self) -> dict:
        return {"Q": self.q, "efficiency": self.efficiency, "num_communities": self.num_communities}


@dataclass(frozen=True)
class StructureSummary:
    stages: tuple[StageStructure, ...]

    @property
    def q_mean(self) -> float | None:
        qs = [s.q for s in self.stages if s.q is not None]
        return sum(qs) / len(qs) if qs else None

    @property
    def efficiency_mean(self) -> float:
        return sum(s.efficiency for s in self.stages) / len(self.stages)

    def to_dict(self) -> dict:
        return {
            "stages": [s.to_dict() for s in self.stages],
            "Q_mean": self.q_mean,
            "efficiency_mean": self.efficiency_mean,
        }


def _structure_summary(graphs: Sequence) -> StructureSummary:
    stages = []
    for g in graphs:
        if g.node_count < 2:
            stages.append(StageStructure(None, 0.0, None))
            continue
        eff = float(global_efficiency(g))
        if g.edge_count == 0:
            stages.append(StageStructure(None, eff, None))
        else:
            part = greedy_communities(g)
            stages.append(StageStructure(float(modularity(g, part)), eff, part.num_communities))
    return StructureSummary(tuple(stages))


@dataclass(frozen=True)
class RunRecord:
    seed: int
    baseline_counts: ConfusionCounts
    baseline_metrics: PerformanceMetrics
    prune: PruneResult
    complexity_base: ComplexityReport
    complexity_pruned: ComplexityReport
    compression: float
    speedup: float
    structure_base: StructureSummary
    structure_pruned: StructureSummary

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "baseline": {
                "counts": self.baseline_counts.to_dict(),
                "metrics": self.baseline_metrics.to_dict(),
            },
            "prune": self.prune.to_dict(),
            "complexity": {
                "base": self.complexity_base.to_dict(),
                "pruned": self.complexity_pruned.to_dict(),
                "compression": self.compression,
                "speedup": self.speedup,
            },
            "structure": {
                "base": self.structure_base.to_dict(),
                "pruned": self.structure_pruned.to_dict(),
            },
        }


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    runs: tuple[RunRecord, ...]

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(), "runs": [r.to_dict() for r in self.runs]}

    def to_json_bytes(self) -> bytes:
        return canonical_bytes(self.to_dict())

    def csv_rows(self) -> list[list]:
        rows = []
        for r in self.runs:
            rows.append([
                self.config.generator.kind,
                r.seed,
                self.config.measure,
                repr(r.prune.best_fraction),
                r.complexity_base.parameters,
                r.complexity_pruned.parameters,
                repr(r.compression),
                r.complexity_base.flops,
                r.complexity_pruned.flops,
                repr(r.speedup),
                "" if r.structure_base.q_mean is None else repr(r.structure_base.q_mean),
                "" if r.structure_pruned.q_mean is None else repr(r.structure_pruned.q_mean),
                repr(r.structure_base.efficiency_mean),
                repr(r.structure_pruned.efficiency_mean),
            ])
        return rows

    def write_csv(self, fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_CSV_HEADER)
        writer.writerows(self.csv_rows())


def _make_evaluator(config: ExperimentConfig, baseline_net: StagedNetwork) -> Evaluator:
    if config.evaluator_kind == "surrogate":
        return SurrogateEvaluator(baseline_net, config.surrogate)
    return ExternalEvaluator(config.external)


def run_single_seed(config: ExperimentConfig, seed: int) -> RunRecord:
    """The full pipeline for one seed: generate, baseline, rank, search, report."""
    net = build_staged_network(config.generator, seed, config.arch, config.single_graph)
    evaluator = _make_evaluator(config, net)
    try:
        baseline_resp = evaluator.evaluate(net, init_seed=seed)
        baseline_auc = auc_roc(baseline_resp.scores) if baseline_resp.scores else None
        baseline = BaselineScores.from_counts(baseline_resp.counts)
        rankings = [rank_edges(g, config.measure, config.direction) for g in net.graphs]
        result = binary_search_prune(
            net, config.measure, evaluator, baseline,
            direction=config.direction, depth=config.depth,
            init_seed=seed, rankings=rankings,
        )
    finally:
        if isinstance(evaluator, ExternalEvaluator):
            evaluator.close()
    pruned_net = _rebuild_pruned(net, result.retained_edges)
    base_complexity = count_complexity(net.dags, config.arch, config.cost_model)
    pruned_complexity = count_complexity(pruned_net.dags, config.arch, config.cost_model)
    return RunRecord(
        seed=seed,
        baseline_counts=baseline_resp.counts,
        baseline_metrics=metrics_from_confusion(baseline_resp.counts, baseline_auc),
        prune=result,
        complexity_base=base_complexity,
        complexity_pruned=pruned_complexity,
        compression=compression_ratio(base_complexity, pruned_complexity),
        speedup=theoretical_speedup(base_complexity, pruned_complexity),
        structure_base=_structure_summary(net.graphs),
        structure_pruned=_structure_summary(pruned_net.graphs),
    )


def _rebuild_pruned(net: StagedNetwork, retained: Sequence[Sequence[Edge]]) -> StagedNetwork:
    victim_sets = [frozenset(set(g.edges) - set(kept)) for g, kept in zip(net.graphs, retained)]
    return prune_network(net, victim_sets)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every seed in order and collect one report."""
    runs = tuple(run_single_seed(config, seed) for seed in config.seeds)
    return ExperimentReport(config, runs)
