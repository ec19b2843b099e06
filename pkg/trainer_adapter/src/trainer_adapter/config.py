"""Adapter configuration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class AdapterConfig:
    """Serving configuration.

    Exactly one of dataset/synthetic provides the images. epochs is the
    training length when set; None defers to the epochs field of each
    request. Weights start from a zero-mean normal with the given std.
    """

    dataset: Path | None = None
    synthetic: bool = False
    epochs: int | None = None
    lr: float = 0.1
    init_std: float = 0.01
    device: str = "cpu"

    def __post_init__(self):
        if self.synthetic == (self.dataset is not None):
            raise ValueError("exactly one of --dataset and --synthetic is required")
        if self.epochs is not None and self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.lr <= 0:
            raise ValueError("learning rate must be positive")
        if self.init_std <= 0:
            raise ValueError("init std must be positive")
