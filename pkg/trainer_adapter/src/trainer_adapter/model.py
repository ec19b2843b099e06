"""A randomly wired net assembled from requested stage edge lists.

Each stage is a DAG over the nodes its edges mention, oriented from
lower to higher index. Zero-in-degree nodes read the stage input with a
stride-2, channel-doubling unit; zero-out-degree nodes average into the
stage output. A node combines its in-edges into a weighted sum and
applies ReLU, separable 3x3 conv, BatchNorm.
"""

from __future__ import annotations

import torch
from torch import nn


class NodeUnit(nn.Module):
    def __init__(self, fan_in: int, c_in: int, c_out: int, stride: int):
        super().__init__()
        self.arc_weight = nn.Parameter(torch.zeros(fan_in))
        self.depthwise = nn.Conv2d(c_in, c_in, 3, stride=stride, padding=1, groups=c_in)
        self.pointwise = nn.Conv2d(c_in, c_out, 1)
        self.bn = nn.BatchNorm2d(c_out)

    def forward(self, inputs: list[torch.Tensor]) -> torch.Tensor:
        gates = torch.sigmoid(self.arc_weight)
        x = sum(g * t for g, t in zip(gates, inputs))
        return self.bn(self.pointwise(self.depthwise(torch.relu(x))))


class Stage(nn.Module):
    def __init__(self, edges: list[tuple[int, int]], c_in: int, c_out: int):
        super().__init__()
        self.edges = [(min(u, v), max(u, v)) for u, v in edges]
        nodes = sorted({v for e in self.edges for v in e})
        self.nodes = nodes
        fan_in = {v: sum(1 for _, w in self.edges if w == v) for v in nodes}
        self.sources = [v for v in nodes if fan_in[v] == 0]
        fan_out = {v: sum(1 for u, _ in self.edges if u == v) for v in nodes}
        self.sinks = [v for v in nodes if fan_out[v] == 0]
        self.units = nn.ModuleDict()
        for v in nodes:
            if v in self.sources:
                self.units[str(v)] = NodeUnit(1, c_in, c_out, stride=2)
            else:
                self.units[str(v)] = NodeUnit(fan_in[v], c_out, c_out, stride=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        outputs: dict[int, torch.Tensor] = {}
        for v in self.nodes:  # ascending order is topological
            if v in self.sources:
                outputs[v] = self.units[str(v)]([x])
            else:
                feeds = [outputs[u] for u, w in self.edges if w == v]
                outputs[v] = self.units[str(v)](feeds)
        drained = [outputs[v] for v in self.sinks]
        return sum(drained) / len(drained)


class RandomWiredNet(nn.Module):
    """Stem, one Stage per requested DAG, 1x1-conv head, linear classifier."""

    def __init__(self, stages: list[list[tuple[int, int]]], channels: int,
                 classes: int, head_width: int = 1280):
        super().__init__()
        self.stem = nn.Sequential(
            nn.Conv2d(1, channels, 3, stride=2, padding=1),
            nn.BatchNorm2d(channels),
            nn.ReLU(),
        )
        blocks = []
        c_in = channels
        for edges in stages:
            c_out = c_in * 2 if blocks else c_in
            blocks.append(Stage(edges, c_in, c_out))
            c_in = c_out
        self.stages = nn.ModuleList(blocks)
        self.head = nn.Sequential(
            nn.Conv2d(c_in, head_width, 1),
            nn.BatchNorm2d(head_width),
            nn.ReLU(),
            nn.AdaptiveAvgPool2d(1),
            nn.Flatten(),
        )
        self.classifier = nn.Linear(head_width, classes)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.stem(x)
        for stage in self.stages:
            x = stage(x)
        return self.classifier(self.head(x))

    def reinitialize(self, std: float) -> None:
        """Normal(0, std) weights, zero biases; BatchNorm stays identity."""
        for module in self.modules():
            if isinstance(module, (nn.Conv2d, nn.Linear)):
                nn.init.normal_(module.weight, mean=0.0, std=std)
                if module.bias is not None:
                    nn.init.zeros_(module.bias)
