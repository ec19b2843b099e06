"""Evaluators: answer "how does this wiring perform after training?".

Two interchangeable implementations sit behind one call shape,
evaluate(network, init_seed) -> EvalResponse:

* SurrogateEvaluator scores a network deterministically from structure
  alone. It compares each stage's global efficiency against the
  unpruned stage and degrades a fixed base confusion row once the mean
  retained efficiency drops below a threshold. No RNG, no training; two
  calls with equal inputs return equal outputs by construction.
* ExternalEvaluator speaks newline-delimited JSON to a child process
  (a real trainer) over stdin/stdout, one request line per evaluation:

    {"type": "evaluate", "stages": [[[u, v], ...], ...],
     "arch": {"C": .., "N": .., "classes": ..},
     "init_seed": .., "epochs": ..}

  and expects {"tp": .., "tn": .., "fp": .., "fn": .., "scores": [..]?}
  back on one line. Field names are frozen. The same init_seed is sent
  on every call of one search so the trainer rewinds to identical
  initial weights.
"""

from __future__ import annotations

import json
import math
import os
import select
import subprocess
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .errors import ContractError, EvaluationError
from .jsonio import plain
from .metrics import ConfusionCounts
from .network import StagedNetwork
from .structure import global_efficiency

__all__ = [
    "EvalResponse",
    "Evaluator",
    "SurrogateParams",
    "SurrogateEvaluator",
    "ExternalEvaluatorConfig",
    "ExternalEvaluator",
    "build_request",
    "parse_response",
]

DEFAULT_BASE_COUNTS = ConfusionCounts(tp=90, tn=2929, fp=71, fn=10)


@dataclass(frozen=True)
class EvalResponse:
    counts: ConfusionCounts
    scores: tuple[tuple[float, int], ...] | None = None


class Evaluator(Protocol):
    def evaluate(self, net: StagedNetwork, init_seed: int) -> EvalResponse: ...


# -- deterministic structural surrogate -------------------------------------


@dataclass(frozen=True)
class SurrogateParams:
    """tau: retained-efficiency threshold; lam: degradation slope."""

    tau: Fraction = Fraction(3, 5)
    lam: int = 200
    base_counts: ConfusionCounts = DEFAULT_BASE_COUNTS

    @staticmethod
    def build(tau: float | str | Fraction = "0.6", lam: int = 200,
              base_counts: ConfusionCounts = DEFAULT_BASE_COUNTS) -> "SurrogateParams":
        # floats go through str so 0.6 means exactly 3/5
        if isinstance(tau, float):
            tau = Fraction(str(tau))
        else:
            tau = Fraction(tau)
        if not 0 <= tau <= 1:
            raise ContractError(f"tau must lie in [0, 1], got {tau}")
        if lam < 0:
            raise ContractError("lam cannot be negative")
        return SurrogateParams(tau, int(lam), base_counts)


class SurrogateEvaluator:
    """Pure function of the stage graphs, anchored to a baseline network.

    Let r be the mean over stages of eff(stage) / eff(baseline stage),
    where both efficiencies average inverse distances over the BASELINE
    stage's node pairs: nodes dropped by pruning count as unreachable.
    A stage ratio counts 1 when its baseline had zero efficiency and 0
    when fewer than two nodes survive. If r >= tau the base confusion
    counts come back unchanged; otherwise ceil(lam * (tau - r)) items
    move from TP to FN and proportionally many (scaled by the
    negative/positive class ratio) from TN to FP, clamped at zero.
    Removing an edge never shortens a distance and never restores a
    node, so r and hence the metrics fall monotonically with pruning.
    """

    def __init__(self, baseline: StagedNetwork, params: SurrogateParams = SurrogateParams()):
        self.params = params
        self._pair_sum0 = tuple(self._pair_sum(g) for g in baseline.graphs)

    @staticmethod
    def _pair_sum(g) -> Fraction:
        """Sum of 1/d over ordered node pairs (the efficiency numerator)."""
        if g.node_count < 2:
            return Fraction(0)
        return global_efficiency(g) * (g.node_count * (g.node_count - 1))

    def retained_ratio(self, net: StagedNetwork) -> Fraction:
        if net.stage_count != len(self._pair_sum0):
            raise ContractError("network stage count differs from the baseline")
        ratios = []
        for g, s0 in zip(net.graphs, self._pair_sum0):
            if s0 == 0:
                ratios.append(Fraction(1))
            else:
                # shared baseline denominator cancels, leaving the pair sums
                ratios.append(self._pair_sum(g) / s0)
        return sum(ratios) / len(ratios)

    def evaluate(self, net: StagedNetwork, init_seed: int) -> EvalResponse:
        del init_seed  # deterministic by construction; nothing to rewind
        r = self.retained_ratio(net)
        base = self.params.base_counts
        if r >= self.params.tau:
            return EvalResponse(base)
        moved = math.ceil(self.params.lam * (self.params.tau - r))
        if base.positives:
            moved_neg = math.ceil(moved * Fraction(base.negatives, base.positives))
        else:
            moved_neg = moved
        tp = max(base.tp - moved, 0)
        tn = max(base.tn - moved_neg, 0)
        return EvalResponse(ConfusionCounts(
            tp=tp,
            tn=tn,
            fp=base.fp + (base.tn - tn),
            fn=base.fn + (base.tp - tp),
        ))


# -- external trainer over a line protocol -----------------------------------


@dataclass(frozen=True)
class ExternalEvaluatorConfig:
    cmd: tuple[str, ...]
    timeout: float = 600.0
    epochs: int = 100

    def __post_init__(self):
        if not self.cmd:
            raise ContractError("external evaluator needs a command line")
        if self.timeout <= 0:
            raise ContractError("timeout must be positive")


def build_request(net: StagedNetwork, init_seed: int, epochs: int) -> bytes:
    payload = {
        "type": "evaluate",
        "stages": net.stage_edge_lists(),
        "arch": {"C": net.arch.channels, "N": net.arch.nodes_per_stage, "classes": net.arch.classes},
        "init_seed": int(init_seed),
        "epochs": int(epochs),
    }
    return (json.dumps(plain(payload), sort_keys=True) + "\n").encode("ascii")


def parse_response(line: str) -> EvalResponse:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise EvaluationError(
            f"evaluator sent a non-JSON line: {exc}", diagnostics={"line": line[:500]}
        ) from exc
    if not isinstance(obj, dict):
        raise EvaluationError("evaluator response must be a JSON object", diagnostics={"line": line[:500]})
    if "error" in obj:
        raise EvaluationError(f"evaluator reported: {obj['error']}", diagnostics={"response": obj})
    missing = {"tp", "tn", "fp", "fn"} - set(obj)
    if missing:
        raise EvaluationError(
            f"evaluator response lacks fields {sorted(missing)}", diagnostics={"response": obj}
        )
    try:
        counts = ConfusionCounts(int(obj["tp"]), int(obj["tn"]), int(obj["fp"]), int(obj["fn"]))
    except (TypeError, ValueError, ContractError) as exc:
        raise EvaluationError(f"evaluator sent bad counts: {exc}", diagnostics={"response": obj}) from exc
    scores = None
    if obj.get("scores") is not None:
        try:
            scores = tuple((float(s), int(label)) for s, label in obj["scores"])
        except (TypeError, ValueError) as exc:
            raise EvaluationError(
                "evaluator scores must be [score, label] pairs", diagnostics={"response": obj}
            ) from exc
    return EvalResponse(counts, scores)


class ExternalEvaluator:
    """Owns one child process and multiplexes evaluation requests over it."""

    def __init__(self, config: ExternalEvaluatorConfig):
        self.config = config
        self._proc: subprocess.Popen | None = None
        self._stderr_file = None
        self._buf = bytearray()

    def __enter__(self) -> "ExternalEvaluator":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _ensure_started(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._buf.clear()
            self._stderr_file = tempfile.TemporaryFile()
            try:
                self._proc = subprocess.Popen(
                    list(self.config.cmd),
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    stderr=self._stderr_file,
                )
            except OSError as exc:
                raise EvaluationError(f"cannot start evaluator: {exc}",
                                      diagnostics={"cmd": list(self.config.cmd)}) from exc
        return self._proc

    def _diagnostics(self) -> dict:
        diag: dict = {"cmd": list(self.config.cmd)}
        if self._proc is not None:
            diag["returncode"] = self._proc.poll()
        if self._stderr_file is not None:
            try:
                self._stderr_file.seek(0)
                tail = self._stderr_file.read()[-4000:]
                diag["stderr"] = tail.decode("utf-8", "replace")
            except OSError:
                pass
        return diag

    def _read_line(self, proc: subprocess.Popen, deadline: float) -> str:
        fd = proc.stdout.fileno()
        while b"\n" not in self._buf:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise EvaluationError(
                    f"evaluator exceeded timeout of {self.config.timeout}s",
                    diagnostics=self._diagnostics(),
                )
            ready, _, _ = select.select([fd], [], [], min(remaining, 0.25))
            if not ready:
                if proc.poll() is not None:
                    raise EvaluationError(
                        f"evaluator exited with code {proc.returncode} before answering",
                        diagnostics=self._diagnostics(),
                    )
                continue
            chunk = os.read(fd, 65536)
            if not chunk:
                raise EvaluationError(
                    "evaluator closed stdout before answering",
                    diagnostics=self._diagnostics(),
                )
            self._buf.extend(chunk)
        line, _, rest = bytes(self._buf).partition(b"\n")
        self._buf = bytearray(rest)
        return line.decode("utf-8", "replace")

    def evaluate(self, net: StagedNetwork, init_seed: int) -> EvalResponse:
        proc = self._ensure_started()
        request = build_request(net, init_seed, self.config.epochs)
        try:
            proc.stdin.write(request)
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise EvaluationError(f"evaluator pipe broke: {exc}",
                                  diagnostics=self._diagnostics()) from exc
        line = self._read_line(proc, time.monotonic() + self.config.timeout)
        return parse_response(line)

    def close(self) -> None:
        if self._proc is not None:
            try:
                if self._proc.stdin:
                    self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self._proc.kill()
                self._proc.wait()
            self._proc = None
        if self._stderr_file is not None:
            self._stderr_file.close()
            self._stderr_file = None
