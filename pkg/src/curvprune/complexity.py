"""Parameter and FLOP accounting for staged randomly wired networks.

The reference architecture: two stem convolutions, three randomly wired
stages of N triplet units (ReLU, 3x3 depthwise-separable conv, BatchNorm)
whose channel counts double per stage, and a classifier head (1x1 conv to
a fixed width, global average pooling, fully connected). Each stage
halves the spatial resolution once, in a transition unit at its entry;
inside a stage every unit maps C to C channels.

Counting rules (one FLOP = one multiply-accumulate):

* depthwise 3x3: 9*C_in parameters; pointwise: C_in*C_out; BatchNorm:
  2*C_out; a full 3x3 conv variant (9*C_in*C_out) can be swapped in.
* every interior DAG edge carries one learnable aggregation scalar and
  costs one feature map worth of MACs; virtual source/sink edges carry
  nothing, so reconnecting a component never increases cost.
* unit FLOPs are parameters-in-the-conv times the unit's output area.

Removing any interior edge therefore strictly decreases parameters and
FLOPs, and nested edge sets give strictly ordered totals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigurationError, ContractError, DegenerateNetworkError
from .graphs import StageDag
from .jsonio import canonical_bytes

__all__ = [
    "ArchitectureSpec",
    "CostModel",
    "StageCost",
    "ComplexityReport",
    "count_complexity",
    "compression_ratio",
    "theoretical_speedup",
]

STAGE_NAMES = ("conv3", "conv4", "conv5")


@dataclass(frozen=True)
class ArchitectureSpec:
    """Fixed architecture constants; the random part lives in the stage DAGs."""

    channels: int = 78
    nodes_per_stage: int = 32
    input_resolution: int = 224
    classes: int = 2
    classifier_width: int = 1280

    def __post_init__(self):
        for name in ("channels", "nodes_per_stage", "classes", "classifier_width"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.input_resolution % 32 != 0:
            raise ConfigurationError("input resolution must divide by 32 (five halvings)")

    @property
    def stage_channels(self) -> tuple[int, int, int]:
        c = self.channels
        return (c, 2 * c, 4 * c)

    @property
    def stage_resolutions(self) -> tuple[int, int, int]:
        r = self.input_resolution
        return (r // 8, r // 16, r // 32)

    def to_dict(self) -> dict:
        return {
            "C": self.channels,
            "N": self.nodes_per_stage,
            "classes": self.classes,
            "input_resolution": self.input_resolution,
            "classifier_width": self.classifier_width,
        }

    @staticmethod
    def from_dict(d) -> "ArchitectureSpec":
        return ArchitectureSpec(
            channels=int(d.get("C", 78)),
            nodes_per_stage=int(d.get("N", 32)),
            classes=int(d.get("classes", 2)),
            input_resolution=int(d.get("input_resolution", 224)),
            classifier_width=int(d.get("classifier_width", 1280)),
        )


@dataclass(frozen=True)
class CostModel:
    """Knobs for the parts the architecture description leaves open."""

    node_conv: str = "separable"  # or "full"
    aggregation_params_per_edge: int = 1
    include_classifier: bool = True

    def __post_init__(self):
        if self.node_conv not in ("separable", "full"):
            raise ConfigurationError(f"unknown conv variant {self.node_conv!r}")
        if self.aggregation_params_per_edge < 0:
            raise ConfigurationError("aggregation parameter count cannot be negative")

    def conv_params(self, c_in: int, c_out: int) -> int:
        if self.node_conv == "separable":
            return 9 * c_in + c_in * c_out
        return 9 * c_in * c_out

    def unit_params(self, c_in: int, c_out: int) -> int:
        return self.conv_params(c_in, c_out) + 2 * c_out


@dataclass(frozen=True)
class StageCost:
    name: str
    parameters: int
    flops: int


@dataclass(frozen=True)
class ComplexityReport:
    parameters: int
    flops: int
    stages: tuple[StageCost, ...]

    def to_dict(self) -> dict:
        return {
            "parameters": self.parameters,
            "flops": self.flops,
            "stages": [
                {"name": s.name, "parameters": s.parameters, "flops": s.flops}
                for s in self.stages
            ],
        }

    def to_json_bytes(self) -> bytes:
        return canonical_bytes(self.to_dict())


def count_complexity(
    dags: Sequence[StageDag],
    arch: ArchitectureSpec = ArchitectureSpec(),
    model: CostModel = CostModel(),
) -> ComplexityReport:
    """Totals plus a per-stage breakdown for a three-stage wiring."""
    if len(dags) != len(STAGE_NAMES):
        raise ContractError(f"expected {len(STAGE_NAMES)} stage dags, got {len(dags)}")
    c = arch.channels
    r = arch.input_resolution
    stages: list[StageCost] = []

    # conv1: plain 3x3 convolution from RGB, stride 2, with BatchNorm.
    p = 9 * 3 * c + 2 * c
    stages.append(StageCost("conv1", p, 9 * 3 * c * (r // 2) ** 2))
    # conv2: triplet unit C -> C, stride 2.
    p = model.unit_params(c, c)
    stages.append(StageCost("conv2", p, model.conv_params(c, c) * (r // 4) ** 2))

    prev_c = c
    for name, dag, c_s, res in zip(STAGE_NAMES, dags, arch.stage_channels, arch.stage_resolutions):
        area = res * res
        params = model.unit_params(prev_c, c_s)  # transition unit, stride 2
        flops = model.conv_params(prev_c, c_s) * area
        params += dag.node_count * model.unit_params(c_s, c_s)
        flops += dag.node_count * model.conv_params(c_s, c_s) * area
        params += dag.edge_count * model.aggregation_params_per_edge
        flops += dag.edge_count * area * c_s
        stages.append(StageCost(name, params, flops))
        prev_c = c_s

    if model.include_classifier:
        width = arch.classifier_width
        head_res = arch.stage_resolutions[-1]
        p = prev_c * width + 2 * width + width * arch.classes
        f = prev_c * width * head_res * head_res + width * arch.classes
        stages.append(StageCost("classifier", p, f))

    return ComplexityReport(
        parameters=sum(s.parameters for s in stages),
        flops=sum(s.flops for s in stages),
        stages=tuple(stages),
    )


def compression_ratio(base: ComplexityReport, pruned: ComplexityReport) -> float:
    if pruned.parameters <= 0:
        raise DegenerateNetworkError("pruned network has no parameters to form a ratio over")
    return base.parameters / pruned.parameters


def theoretical_speedup(base: ComplexityReport, pruned: ComplexityReport) -> float:
    if pruned.flops <= 0:
        raise DegenerateNetworkError("pruned network has no FLOPs to form a ratio over")
    return base.flops / pruned.flops
