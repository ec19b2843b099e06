"""Binary-search pruning engine and experiment pipeline tests."""

from fractions import Fraction

import pytest

from curvprune import (
    ConfigurationError,
    ConfusionCounts,
    ContractError,
    EvalResponse,
    EvaluationError,
    ExperimentConfig,
    GeneratorConfig,
    SurrogateEvaluator,
    binary_search_prune,
    rank_edges,
    select_victims,
)
from curvprune.network import build_staged_network, prune_network
from curvprune.pruning import BaselineScores, run_experiment, run_single_seed, REPORT_CSV_HEADER

from oracles import efficiency_from_edges

BASE_COUNTS = ConfusionCounts(tp=90, tn=2929, fp=71, fn=10)
WORSE_COUNTS = ConfusionCounts(tp=80, tn=2900, fp=100, fn=20)
BENCHMARK_SEEDS = (3, 16, 34, 57, 59, 61, 66, 72, 92, 97)

PASS_TRACE = [50.0, 75.0, 87.5, 93.75, 96.875]
FAIL_TRACE = [50.0, 25.0, 12.5, 6.25, 3.125]


class FixedEvaluator:
    """Returns one canned response forever; counts evaluation calls."""

    def __init__(self, counts):
        self.counts = counts
        self.calls = 0

    def evaluate(self, net, init_seed):
        self.calls += 1
        return EvalResponse(self.counts)


class FailAfter:
    def __init__(self, good_calls):
        self.remaining = good_calls

    def evaluate(self, net, init_seed):
        if self.remaining == 0:
            raise EvaluationError("trainer crashed", diagnostics={"returncode": 3})
        self.remaining -= 1
        return EvalResponse(BASE_COUNTS)


def er_net(seed=3, n=16, p=0.3):
    return build_staged_network(GeneratorConfig(kind="ER", n=n, p=p), seed)


# -- select_victims -------------------------------------------------------------

def test_select_victims_extremes_and_midpoint():
    ranking = [(i, i + 1) for i in range(64)]
    assert select_victims(ranking, 0) == frozenset()
    assert select_victims(ranking, 100) == frozenset(ranking)
    half = select_victims(ranking, 50)
    assert half == frozenset(ranking[-32:])


def test_select_victims_nested_over_search_fractions():
    ranking = [(i, i + 1) for i in range(37)]
    fractions = sorted(k * Fraction(25, 8) for k in range(33))
    previous = frozenset()
    for fraction in fractions:
        current = select_victims(ranking, fraction)
        assert previous <= current
        previous = current


def test_select_victims_rejects_out_of_range():
    with pytest.raises(ContractError):
        select_victims([(0, 1)], -1)
    with pytest.raises(ContractError):
        select_victims([(0, 1)], 101)


# -- binary search mechanics ------------------------------------------------------

def test_always_passing_evaluator_walks_the_upper_path():
    net = er_net()
    evaluator = FixedEvaluator(BASE_COUNTS)
    baseline = BaselineScores.from_counts(BASE_COUNTS)
    result = binary_search_prune(net, "FRC", evaluator, baseline)
    assert [t.fraction for t in result.trace] == PASS_TRACE
    assert all(t.passed for t in result.trace)
    assert result.best_fraction == 96.875
    assert evaluator.calls == 5
    for graph, kept in zip(net.graphs, result.retained_edges):
        expected = len(graph.edges) - int(Fraction("96.875") * len(graph.edges) // 100)
        assert len(kept) == expected


def test_always_failing_evaluator_returns_unpruned_config():
    net = er_net()
    baseline = BaselineScores.from_counts(BASE_COUNTS)
    result = binary_search_prune(net, "FRC", FixedEvaluator(WORSE_COUNTS), baseline)
    assert [t.fraction for t in result.trace] == FAIL_TRACE
    assert not any(t.passed for t in result.trace)
    assert result.best_fraction == 0.0
    assert result.retained_edges == tuple(g.edges for g in net.graphs)
    assert result.best_counts == BASE_COUNTS


def test_depth_controls_evaluation_count():
    net = er_net()
    baseline = BaselineScores.from_counts(BASE_COUNTS)
    evaluator = FixedEvaluator(BASE_COUNTS)
    result = binary_search_prune(net, "FRC", evaluator, baseline, depth=3)
    assert evaluator.calls == 3
    assert len(result.trace) == 3
    with pytest.raises(ContractError):
        binary_search_prune(net, "FRC", evaluator, baseline, depth=0)


def test_trace_replays_as_bisection():
    net = build_staged_network(GeneratorConfig(kind="BA", n=32, m=5), 9)
    evaluator = SurrogateEvaluator(net)
    baseline = BaselineScores.from_counts(evaluator.evaluate(net, 9).counts)
    result = binary_search_prune(net, "FRC", evaluator, baseline, init_seed=9)
    lo, hi = 0.0, 100.0
    for entry in result.trace:
        assert entry.fraction == (lo + hi) / 2
        if entry.passed:
            lo = entry.fraction
        else:
            hi = entry.fraction
    assert result.best_fraction == lo


def test_evaluator_failure_aborts_with_trace_preserved():
    net = er_net()
    baseline = BaselineScores.from_counts(BASE_COUNTS)
    with pytest.raises(EvaluationError) as info:
        binary_search_prune(net, "FRC", FailAfter(2), baseline)
    trace = info.value.trace
    assert [entry["fraction"] for entry in trace] == [50.0, 75.0]


def test_mismatched_ranking_count_rejected():
    net = er_net()
    baseline = BaselineScores.from_counts(BASE_COUNTS)
    with pytest.raises(ContractError):
        binary_search_prune(net, "FRC", FixedEvaluator(BASE_COUNTS), baseline,
                            rankings=[[(0, 1)]])


def test_best_fraction_matches_independent_efficiency_sweep():
    # tau = 0.6 surrogate on WS(32, 4, 0.75, seed 7): the search must land on
    # the largest visited multiple of 3.125 whose pruned stages keep at least
    # 60% of the summed inverse distances, recomputed here with the
    # standalone BFS oracle.
    net = build_staged_network(GeneratorConfig(kind="WS", n=32, k=4, p=0.75), 7)
    rankings = [rank_edges(g, "ORC") for g in net.graphs]

    def oracle_ratio(fraction):
        ratios = []
        pruned = prune_network(net, tuple(select_victims(r, fraction) for r in rankings))
        for base_g, pruned_g in zip(net.graphs, pruned.graphs):
            s0 = efficiency_from_edges(base_g.nodes, base_g.edges) * (
                base_g.node_count * (base_g.node_count - 1))
            if pruned_g.node_count < 2:
                s1 = Fraction(0)
            else:
                s1 = efficiency_from_edges(pruned_g.nodes, pruned_g.edges) * (
                    pruned_g.node_count * (pruned_g.node_count - 1))
            ratios.append(s1 / s0)
        return sum(ratios) / len(ratios)

    multiples = [k * Fraction(25, 8) for k in range(32)]
    ratios = [oracle_ratio(f) for f in multiples]
    assert all(a >= b for a, b in zip(ratios, ratios[1:])), "ratio must fall with fraction"
    passing = [f for f, r in zip(multiples, ratios) if r >= Fraction(3, 5)]
    expected = float(max(passing)) if passing else 0.0

    evaluator = SurrogateEvaluator(net)
    baseline = BaselineScores.from_counts(evaluator.evaluate(net, 7).counts)
    result = binary_search_prune(net, "ORC", evaluator, baseline, init_seed=7,
                                 rankings=rankings)
    assert result.best_fraction == expected
    assert 0.0 < result.best_fraction < 96.875  # nontrivial by design


# -- experiment pipeline ----------------------------------------------------------

@pytest.fixture(scope="module")
def er_orc_batch():
    config = ExperimentConfig(
        generator=GeneratorConfig(kind="ER", n=32, p=0.2),
        measure="ORC",
        seeds=BENCHMARK_SEEDS,
    )
    return run_experiment(config)


def test_batch_has_one_row_per_seed_with_sane_ratios(er_orc_batch):
    assert len(er_orc_batch.runs) == 10
    for run in er_orc_batch.runs:
        assert run.compression >= 1.0
        assert run.speedup >= 1.0
        assert run.complexity_pruned.parameters < run.complexity_base.parameters


def test_batch_runs_respect_dominance_or_unpruned(er_orc_batch):
    for run in er_orc_batch.runs:
        baseline = BaselineScores.from_counts(run.baseline_counts)
        if run.prune.best_fraction == 0.0:
            assert run.prune.best_counts == run.baseline_counts
        else:
            assert baseline.met_by(run.prune.best_counts)
        assert len(run.prune.trace) == 5
        for entry in run.prune.trace:
            assert Fraction(str(entry.fraction)) % Fraction(25, 8) == 0


def test_batch_csv_shape(er_orc_batch):
    rows = er_orc_batch.csv_rows()
    assert len(rows) == 10
    assert len(REPORT_CSV_HEADER) == len(rows[0]) == 14
    assert rows[0][0] == "ER" and rows[0][2] == "ORC"
    assert [r[1] for r in rows] == list(BENCHMARK_SEEDS)


def test_baselines_identical_across_measures():
    seeds = (3,)
    records = {}
    for measure in ("FRC", "ORC"):
        config = ExperimentConfig(
            generator=GeneratorConfig(kind="ER", n=16, p=0.3),
            measure=measure, seeds=seeds,
        )
        records[measure] = run_single_seed(config, 3)
    assert records["FRC"].baseline_counts == records["ORC"].baseline_counts
    assert records["FRC"].complexity_base == records["ORC"].complexity_base


def test_reports_are_byte_deterministic():
    config = ExperimentConfig(
        generator=GeneratorConfig(kind="WS", n=16, k=4, p=0.75),
        measure="FRC", seeds=(0, 1),
    )
    first = run_experiment(config).to_json_bytes()
    second = run_experiment(config).to_json_bytes()
    assert first == second


# -- configuration -----------------------------------------------------------------

MINIMAL = {
    "generator": {"kind": "ER", "n": 32, "p": 0.2},
    "measure": "ORC",
    "seeds": [3, 16],
}


def test_config_from_minimal_dict_defaults():
    config = ExperimentConfig.from_dict(MINIMAL)
    assert config.depth == 5
    assert config.direction == "default"
    assert config.evaluator_kind == "surrogate"
    assert config.surrogate.tau == Fraction(3, 5)
    assert config.seeds == (3, 16)


def test_config_round_trips_through_json_dict():
    config = ExperimentConfig.from_dict(MINIMAL)
    assert ExperimentConfig.from_dict(config.to_dict()) == config


def test_config_measure_case_folded():
    config = ExperimentConfig.from_dict({**MINIMAL, "measure": "orc"})
    assert config.measure == "ORC"


def test_config_rejects_unknown_and_missing_fields():
    with pytest.raises(ConfigurationError, match="unknown config fields"):
        ExperimentConfig.from_dict({**MINIMAL, "depht": 5})
    with pytest.raises(ConfigurationError, match="required"):
        ExperimentConfig.from_dict({"generator": MINIMAL["generator"], "seeds": [1]})
    with pytest.raises(ConfigurationError, match="integers"):
        ExperimentConfig.from_dict({**MINIMAL, "seeds": ["three"]})


def test_config_rejects_bad_evaluator_sections():
    with pytest.raises(ConfigurationError, match="needs 'cmd'"):
        ExperimentConfig.from_dict({**MINIMAL, "evaluator": {"kind": "external"}})
    with pytest.raises(ConfigurationError, match="unknown evaluator fields"):
        ExperimentConfig.from_dict({**MINIMAL, "evaluator": {"kind": "surrogate", "bogus": 1}})
    with pytest.raises(ConfigurationError, match="unknown evaluator kind"):
        ExperimentConfig.from_dict({**MINIMAL, "evaluator": {"kind": "oracle"}})


def test_config_constructor_validation():
    generator = GeneratorConfig(kind="ER", n=16, p=0.3)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(generator=generator, measure="XYZ", seeds=(1,))
    with pytest.raises(ConfigurationError):
        ExperimentConfig(generator=generator, measure="FRC", seeds=())
    with pytest.raises(ConfigurationError):
        ExperimentConfig(generator=generator, measure="FRC", seeds=(1, 1))
    with pytest.raises(ConfigurationError):
        ExperimentConfig(generator=generator, measure="FRC", seeds=(1,), depth=0)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(generator=generator, measure="FRC", seeds=(1,), direction="up")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(generator=generator, measure="FRC", seeds=(1,),
                         evaluator_kind="external")


def test_external_config_round_trip():
    config = ExperimentConfig.from_dict({
        **MINIMAL,
        "evaluator": {"kind": "external", "cmd": ["python3", "trainer.py"],
                      "timeout": 30.0, "epochs": 5},
    })
    assert config.evaluator_kind == "external"
    assert config.external.cmd == ("python3", "trainer.py")
    assert config.external.epochs == 5
    assert ExperimentConfig.from_dict(config.to_dict()) == config
