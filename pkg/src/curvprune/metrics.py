"""Confusion-count metrics and ROC area.

All headline metrics are percentages derived from integer confusion
counts; exact Fractions back every comparison so that 'at least as good
as baseline' never hinges on float noise. AUC is computed from ranked
scores with trapezoids, grouping tied scores into single threshold steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractError, UndefinedMetricError

__all__ = [
    "ConfusionCounts",
    "PerformanceMetrics",
    "metrics_from_confusion",
    "auc_roc",
]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ContractError(f"{name} must be a nonnegative integer, got {v!r}")

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.tn + self.fp

    @property
    def total(self) -> int:
        return self.positives + self.negatives

    # Exact percentage forms, for comparisons that must not round.

    def accuracy_exact(self) -> Fraction:
        self._check_denominators()
        return Fraction(100 * (self.tp + self.tn), self.total)

    def specificity_exact(self) -> Fraction:
        self._check_denominators()
        return Fraction(100 * self.tn, self.negatives)

    def sensitivity_exact(self) -> Fraction:
        self._check_denominators()
        return Fraction(100 * self.tp, self.positives)

    def _check_denominators(self) -> None:
        if self.positives == 0 or self.negatives == 0:
            raise UndefinedMetricError(
                f"metrics need both classes present, got P={self.positives}, N={self.negatives}"
            )

    def to_dict(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}

    @staticmethod
    def from_dict(d) -> "ConfusionCounts":
        try:
            return ConfusionCounts(int(d["tp"]), int(d["tn"]), int(d["fp"]), int(d["fn"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"bad confusion counts {d!r}") from exc


@dataclass(frozen=True)
class PerformanceMetrics:
    """Headline percentages. precision and f1 are None when tp+fp == 0."""

    accuracy: float
    specificity: float
    sensitivity: float
    precision: float | None
    f1: float | None
    auc: float | None = None

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "specificity": self.specificity,
            "sensitivity": self.sensitivity,
            "precision": self.precision,
            "f1": self.f1,
            "auc": self.auc,
        }


def metrics_from_confusion(c: ConfusionCounts, auc: float | None = None) -> PerformanceMetrics:
    """Percentages from counts; errors if either true class is empty.

    precision (and with it f1) is reported as absent rather than zero when
    no positive predictions were made at all.
    """
    accuracy = float(c.accuracy_exact())
    specificity = float(c.specificity_exact())
    sensitivity = float(c.sensitivity_exact())
    predicted_pos = c.tp + c.fp
    if predicted_pos == 0:
        precision = None
        f1 = None
    else:
        precision = float(Fraction(100 * c.tp, predicted_pos))
        # harmonic mean collapses to 2*TP / (2*TP + FP + FN)
        f1_den = 2 * c.tp + c.fp + c.fn
        f1 = float(Fraction(200 * c.tp, f1_den)) if f1_den else None
    return PerformanceMetrics(accuracy, specificity, sensitivity, precision, f1, auc)


def auc_roc(scored: Sequence[tuple[float, int]]) -> float:
    """Area under the ROC curve as a percentage, from (score, label) pairs.

    Labels are 1 for positive, 0 for negative. Scores are sorted
    descending and tied scores form a single threshold step, i.e. the
    curve gets one vertex per distinct score; areas come from trapezoids.
    """
    if not scored:
        raise UndefinedMetricError("AUC needs at least one scored item")
    pos = sum(1 for _, label in scored if label)
    neg = len(scored) - pos
    if pos == 0 or neg == 0:
        raise UndefinedMetricError("AUC needs both classes present")
    ordered = sorted(scored, key=lambda item: -item[0])
    area = Fraction(0)
    tp = fp = 0
    prev_tp = prev_fp = 0
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j][0] == ordered[i][0]:
            if ordered[j][1]:
                tp += 1
            else:
                fp += 1
            j += 1
        # one trapezoid per distinct-score step
        area += Fraction(fp - prev_fp, neg) * (Fraction(prev_tp, pos) + Fraction(tp, pos)) / 2
        prev_tp, prev_fp = tp, fp
        i = j
    return float(100 * area)
