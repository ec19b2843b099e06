"""The serving loop: one JSON request per line, one response per line.

Every request rewinds torch's global seed to its init_seed before the
model is built, so identical requests produce identical responses on
CPU (GPU kernels may break bitwise repeatability; pin the device to cpu
when that matters). Bad requests never kill the process: they get an
{"error": ...} line and serving continues. EOF exits cleanly.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import torch

from .config import AdapterConfig
from .datasets import Split, load_directory, synthetic_splits
from .model import RandomWiredNet

BATCH_SIZE = 16


class RequestError(Exception):
    """Anything wrong with one request; answered, never fatal."""


def parse_request(line: str) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RequestError(f"request is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise RequestError("request must be a JSON object")
    if obj.get("type") != "evaluate":
        raise RequestError(f"unsupported request type {obj.get('type')!r}")
    stages = obj.get("stages")
    if not isinstance(stages, list) or not stages:
        raise RequestError("request needs a nonempty stage list")
    for i, stage in enumerate(stages):
        if not isinstance(stage, list) or not stage:
            raise RequestError(f"stage {i} has no edges")
        for edge in stage:
            if (not isinstance(edge, list) or len(edge) != 2
                    or not all(isinstance(v, int) and v >= 0 for v in edge)):
                raise RequestError(f"stage {i} contains a malformed edge {edge!r}")
    arch = obj.get("arch")
    if not isinstance(arch, dict):
        raise RequestError("request needs an arch object")
    for key in ("C", "N", "classes"):
        if not isinstance(arch.get(key), int) or arch[key] < 1:
            raise RequestError(f"arch.{key} must be a positive integer")
    if arch["classes"] != 2:
        raise RequestError("only binary classification is supported")
    if not isinstance(obj.get("init_seed"), int):
        raise RequestError("init_seed must be an integer")
    epochs = obj.get("epochs")
    if epochs is not None and (not isinstance(epochs, int) or epochs < 1):
        raise RequestError("epochs must be a positive integer")
    return obj


def _train(model, split: Split, epochs: int, lr: float, device) -> None:
    model.train()
    optimizer = torch.optim.SGD(model.parameters(), lr=lr)
    loss_fn = torch.nn.CrossEntropyLoss()
    n = len(split)
    for _ in range(epochs):
        order = torch.randperm(n)
        for start in range(0, n, BATCH_SIZE):
            batch = order[start:start + BATCH_SIZE]
            optimizer.zero_grad()
            logits = model(split.images[batch].to(device))
            loss = loss_fn(logits, split.labels[batch].to(device))
            loss.backward()
            optimizer.step()


def _evaluate(model, split: Split, device) -> dict:
    model.eval()
    counts = {"tp": 0, "tn": 0, "fp": 0, "fn": 0}
    scores = []
    with torch.no_grad():
        for start in range(0, len(split), BATCH_SIZE):
            images = split.images[start:start + BATCH_SIZE].to(device)
            labels = split.labels[start:start + BATCH_SIZE]
            probs = torch.softmax(model(images), dim=1)[:, 1].cpu()
            for prob, label in zip(probs.tolist(), labels.tolist()):
                predicted = 1 if prob >= 0.5 else 0
                key = ("t" if predicted == label else "f") + ("p" if predicted else "n")
                counts[key] += 1
                scores.append([prob, label])
    counts["scores"] = scores
    return counts


def handle_request(request: dict, config: AdapterConfig,
                   loaded: tuple[Split, Split] | None) -> dict:
    torch.manual_seed(request["init_seed"])
    train, test = loaded if loaded is not None else synthetic_splits()
    stages = [[tuple(edge) for edge in stage] for stage in request["stages"]]
    device = torch.device(config.device)
    model = RandomWiredNet(
        stages, channels=request["arch"]["C"], classes=request["arch"]["classes"],
    ).to(device)
    model.reinitialize(config.init_std)
    epochs = config.epochs if config.epochs is not None else request.get("epochs", 100)
    _train(model, train, epochs, config.lr, device)
    return _evaluate(model, test, device)


def serve(stdin, stdout, config: AdapterConfig) -> int:
    loaded = load_directory(config.dataset) if config.dataset else None
    for line in stdin:
        if not line.strip():
            continue
        try:
            request = parse_request(line)
            response = handle_request(request, config, loaded)
        except RequestError as exc:
            print(json.dumps({"error": str(exc)}), file=stdout, flush=True)
            continue
        print(json.dumps(response), file=stdout, flush=True)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="trainer-adapter",
        description="Serve train-and-test evaluations over stdin/stdout JSON lines.",
    )
    parser.add_argument("--dataset", type=Path, default=None,
                        help="root with train/{positive,negative} and test/{...}")
    parser.add_argument("--synthetic", action="store_true",
                        help="fabricate a tiny random dataset instead")
    parser.add_argument("--epochs", type=int, default=None,
                        help="override the per-request epoch count")
    parser.add_argument("--lr", type=float, default=0.1)
    args = parser.parse_args(argv)
    try:
        config = AdapterConfig(
            dataset=args.dataset, synthetic=args.synthetic,
            epochs=args.epochs, lr=args.lr,
        )
    except ValueError as exc:
        parser.error(str(exc))
    torch.set_num_threads(1)
    return serve(sys.stdin, sys.stdout, config)


def run() -> None:
    raise SystemExit(main())
