"""Image sources: a directory layout with optional manifest, or synthetic.

A dataset directory holds train/{positive,negative} and
test/{positive,negative} image folders. If a manifest.csv sits at the
root (columns: path, split, label) it wins over the directory walk.
Images load as grayscale; dataset mode resizes to 224, synthetic mode
fabricates 32x32 noise so a smoke run costs nothing.
"""

from __future__ import annotations

import csv
from pathlib import Path

import torch

DATASET_SIZE = 224
SYNTHETIC_SIZE = 32
SYNTHETIC_COUNT = 8  # per split, half positive


class Split:
    """One split: a stacked image tensor and an int label vector."""

    def __init__(self, images: torch.Tensor, labels: torch.Tensor):
        if images.shape[0] != labels.shape[0] or images.shape[0] == 0:
            raise ValueError("split needs matching, nonempty images and labels")
        self.images = images
        self.labels = labels

    def __len__(self):
        return self.images.shape[0]


def _load_image(path: Path, size: int) -> torch.Tensor:
    from PIL import Image

    with Image.open(path) as img:
        img = img.convert("L").resize((size, size))
        raw = torch.frombuffer(bytearray(img.tobytes()), dtype=torch.uint8)
    return raw.reshape(1, size, size).float() / 255.0


def _from_pairs(pairs: list[tuple[Path, int]], size: int) -> Split:
    pairs = sorted(pairs)  # path order fixes the data order
    images = torch.stack([_load_image(path, size) for path, _ in pairs])
    labels = torch.tensor([label for _, label in pairs], dtype=torch.long)
    return Split(images, labels)


def load_directory(root: Path) -> tuple[Split, Split]:
    """(train, test) from the documented layout or the manifest."""
    manifest = root / "manifest.csv"
    if manifest.exists():
        rows: dict[str, list[tuple[Path, int]]] = {"train": [], "test": []}
        with manifest.open(newline="") as fh:
            for row in csv.DictReader(fh):
                rows[row["split"]].append((root / row["path"], int(row["label"])))
        return (_from_pairs(rows["train"], DATASET_SIZE),
                _from_pairs(rows["test"], DATASET_SIZE))
    splits = []
    for split in ("train", "test"):
        pairs = []
        for name, label in (("positive", 1), ("negative", 0)):
            folder = root / split / name
            if not folder.is_dir():
                raise FileNotFoundError(f"missing dataset folder {folder}")
            pairs.extend((path, label) for path in folder.iterdir() if path.is_file())
        splits.append(_from_pairs(pairs, DATASET_SIZE))
    return splits[0], splits[1]


def synthetic_splits() -> tuple[Split, Split]:
    """Tiny random-image dataset; depends on the ambient torch seed."""
    splits = []
    for _ in range(2):
        images = torch.rand(SYNTHETIC_COUNT, 1, SYNTHETIC_SIZE, SYNTHETIC_SIZE)
        labels = torch.tensor(
            [1] * (SYNTHETIC_COUNT // 2) + [0] * (SYNTHETIC_COUNT - SYNTHETIC_COUNT // 2)
        )
        # positives get a brighter center patch so there is signal to learn
        half = SYNTHETIC_SIZE // 2
        images[: SYNTHETIC_COUNT // 2, :, half - 4:half + 4, half - 4:half + 4] += 0.5
        splits.append(Split(images.clamp(max=1.0), labels))
    return splits[0], splits[1]
