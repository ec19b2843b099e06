"""Report files: per-experiment outputs and cross-experiment summaries.

An experiment writes report.json (canonical, byte-stable) plus a flat
report.csv. The report subcommand then aggregates any number of those
JSON files into summary.csv (mean/max per graph family and measure) and
two plot-data CSVs: box-plot quantiles and per-seed fraction/compression
points. Plot data only; nothing here renders.
"""

from __future__ import annotations

import csv
from pathlib import Path
from statistics import mean

from .errors import ConfigurationError, ContractError
from .pruning import ExperimentReport

__all__ = [
    "quartiles",
    "write_report_outputs",
    "write_summary_outputs",
    "SUMMARY_CSV_HEADER",
    "BOXPLOT_CSV_HEADER",
    "POINTS_CSV_HEADER",
]

SUMMARY_CSV_HEADER = (
    "class,measure,direction,runs,best_fraction_mean,compression_mean,compression_max,"
    "speedup_mean,speedup_max,accuracy_mean,accuracy_max,sensitivity_mean,specificity_mean,"
    "Q_base_mean,Q_pruned_mean,eff_base_mean,eff_pruned_mean"
)
BOXPLOT_CSV_HEADER = "class,measure,direction,metric,min,q1,median,q3,max"
POINTS_CSV_HEADER = "class,measure,direction,seed,best_fraction,compression,speedup"

# metrics that get box-plot rows, in output order
_BOX_METRICS = (
    "best_fraction",
    "compression",
    "speedup",
    "accuracy",
    "Q_base",
    "Q_pruned",
    "eff_base",
    "eff_pruned",
)


def _median(sorted_values: list[float]) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2 == 1:
        return sorted_values[mid]
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2.0


def quartiles(values: list[float]) -> tuple[float, float, float, float, float]:
    """Five-number summary with Tukey hinges (halves share the median
    element when the count is odd)."""
    if not values:
        raise ContractError("cannot summarise an empty value list")
    ordered = sorted(values)
    n = len(ordered)
    half = (n + 1) // 2
    return (
        ordered[0],
        _median(ordered[:half]),
        _median(ordered),
        _median(ordered[n - half:]),
        ordered[-1],
    )


def write_report_outputs(report: ExperimentReport, outdir: Path) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_bytes(report.to_json_bytes())
    with open(outdir / "report.csv", "w", newline="") as fh:
        report.write_csv(fh)


def _run_metrics(run: dict) -> dict[str, float | None]:
    prune = run["prune"]
    best = prune["best_metrics"]
    complexity = run["complexity"]
    structure = run["structure"]
    return {
        "best_fraction": float(prune["best_fraction"]),
        "compression": float(complexity["compression"]),
        "speedup": float(complexity["speedup"]),
        "accuracy": float(best["accuracy"]),
        "sensitivity": float(best["sensitivity"]),
        "specificity": float(best["specificity"]),
        "Q_base": structure["base"]["Q_mean"],
        "Q_pruned": structure["pruned"]["Q_mean"],
        "eff_base": structure["base"]["efficiency_mean"],
        "eff_pruned": structure["pruned"]["efficiency_mean"],
    }


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def write_summary_outputs(reports: list[dict], outdir: Path) -> None:
    """Aggregate report.json payloads grouped by (family, measure, direction)."""
    groups: dict[tuple[str, str, str], list[dict]] = {}
    points: dict[tuple[str, str, str], list[tuple[int, float, float, float]]] = {}
    for payload in reports:
        try:
            config = payload["config"]
            key = (
                str(config["generator"]["kind"]),
                str(config["measure"]),
                str(config["direction"]),
            )
            for run in payload["runs"]:
                groups.setdefault(key, []).append(_run_metrics(run))
                points.setdefault(key, []).append((
                    int(run["seed"]),
                    float(run["prune"]["best_fraction"]),
                    float(run["complexity"]["compression"]),
                    float(run["complexity"]["speedup"]),
                ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"report payload missing field: {exc}") from exc

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    with open(outdir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_CSV_HEADER.split(","))
        for key in sorted(groups):
            rows = groups[key]
            def col(name: str) -> list[float]:
                return [r[name] for r in rows if r[name] is not None]
            qb, qp = col("Q_base"), col("Q_pruned")
            writer.writerow([
                *key,
                len(rows),
                _fmt(mean(col("best_fraction"))),
                _fmt(mean(col("compression"))),
                _fmt(max(col("compression"))),
                _fmt(mean(col("speedup"))),
                _fmt(max(col("speedup"))),
                _fmt(mean(col("accuracy"))),
                _fmt(max(col("accuracy"))),
                _fmt(mean(col("sensitivity"))),
                _fmt(mean(col("specificity"))),
                _fmt(mean(qb) if qb else None),
                _fmt(mean(qp) if qp else None),
                _fmt(mean(col("eff_base"))),
                _fmt(mean(col("eff_pruned"))),
            ])

    with open(outdir / "boxplot_quantiles.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BOXPLOT_CSV_HEADER.split(","))
        for key in sorted(groups):
            rows = groups[key]
            for metric in _BOX_METRICS:
                values = [r[metric] for r in rows if r[metric] is not None]
                if not values:
                    continue
                lo, q1, med, q3, hi = quartiles(values)
                writer.writerow([*key, metric, *(repr(v) for v in (lo, q1, med, q3, hi))])

    with open(outdir / "fraction_compression.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(POINTS_CSV_HEADER.split(","))
        for key in sorted(points):
            for seed, fraction, compression, speedup in sorted(points[key]):
                writer.writerow([*key, seed, repr(fraction), repr(compression), repr(speedup)])
