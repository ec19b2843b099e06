"""Curvature-guided pruning of randomly wired neural networks.

The package builds staged random graphs (ER, WS, BA), scores their edges
with Forman curvature, Ollivier curvature, or edge betweenness, prunes
the lowest-ranked edges under a binary search on the pruning fraction,
and reports parameter/FLOP compression together with community structure
shifts. Evaluation plugs in either a closed-form surrogate or an
external trainer speaking a line-delimited JSON protocol.
"""

from .complexity import (
    ArchitectureSpec,
    ComplexityReport,
    CostModel,
    StageCost,
    compression_ratio,
    count_complexity,
    theoretical_speedup,
)
from .errors import (
    ConfigurationError,
    ContractError,
    CurvpruneError,
    DegenerateNetworkError,
    DisconnectedSupportError,
    EvaluationError,
    OracleRefusal,
    UndefinedMetricError,
)
from .evaluators import (
    EvalResponse,
    Evaluator,
    ExternalEvaluator,
    ExternalEvaluatorConfig,
    SurrogateEvaluator,
    SurrogateParams,
    build_request,
    parse_response,
)
from .graphs import (
    GeneratorConfig,
    StageDag,
    UndirectedGraph,
    all_pairs_shortest_paths,
    generate,
    generate_ba,
    generate_er,
    generate_ws,
    remove_edges,
    repair_connectivity,
    to_dag,
    topological_order,
)
from .measures import (
    DIRECTIONS,
    MEASURES,
    EdgeScoreTable,
    NodeEdgeWeights,
    ebc,
    frc,
    frc_weighted,
    orc,
    rank_edges,
    score_table,
)
from .metrics import ConfusionCounts, PerformanceMetrics, auc_roc, metrics_from_confusion
from .network import StagedNetwork, build_staged_network, prune_network
from .pruning import (
    BaselineScores,
    ExperimentConfig,
    ExperimentReport,
    PruneResult,
    RunRecord,
    binary_search_prune,
    run_experiment,
    run_single_seed,
    select_victims,
)
from .reporting import quartiles, write_report_outputs, write_summary_outputs
from .structure import (
    Partition,
    StructureReport,
    global_efficiency,
    greedy_communities,
    modularity,
    structure_report,
)
from .transport import CostMatrix, DiscreteMeasure, TransportPlan, brute_force_w1, wasserstein1

__version__ = "0.1.0"

__all__ = [
    "ArchitectureSpec",
    "BaselineScores",
    "ComplexityReport",
    "ConfigurationError",
    "ConfusionCounts",
    "ContractError",
    "CostMatrix",
    "CostModel",
    "CurvpruneError",
    "DIRECTIONS",
    "DegenerateNetworkError",
    "DiscreteMeasure",
    "DisconnectedSupportError",
    "EdgeScoreTable",
    "EvalResponse",
    "EvaluationError",
    "Evaluator",
    "ExperimentConfig",
    "ExperimentReport",
    "ExternalEvaluator",
    "ExternalEvaluatorConfig",
    "GeneratorConfig",
    "MEASURES",
    "NodeEdgeWeights",
    "OracleRefusal",
    "Partition",
    "PerformanceMetrics",
    "PruneResult",
    "RunRecord",
    "StageCost",
    "StageDag",
    "StagedNetwork",
    "StructureReport",
    "SurrogateEvaluator",
    "SurrogateParams",
    "TransportPlan",
    "UndefinedMetricError",
    "UndirectedGraph",
    "all_pairs_shortest_paths",
    "auc_roc",
    "binary_search_prune",
    "brute_force_w1",
    "build_request",
    "build_staged_network",
    "compression_ratio",
    "count_complexity",
    "ebc",
    "frc",
    "frc_weighted",
    "generate",
    "generate_ba",
    "generate_er",
    "generate_ws",
    "global_efficiency",
    "greedy_communities",
    "metrics_from_confusion",
    "modularity",
    "orc",
    "parse_response",
    "prune_network",
    "quartiles",
    "rank_edges",
    "remove_edges",
    "repair_connectivity",
    "run_experiment",
    "run_single_seed",
    "score_table",
    "select_victims",
    "structure_report",
    "theoretical_speedup",
    "to_dag",
    "topological_order",
    "wasserstein1",
    "write_report_outputs",
    "write_summary_outputs",
]
