"""Averaging per-scenario reports into model/tier tables."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from statistics import fmean
from typing import Any, Iterable, Mapping

from .scenario import TIERS

ALL = "all"
DELTA = "delta"  # S5 mean minus S1 mean
METRIC_ORDER = ("tsa", "pv", "cc", "ce", "dc", "tc", "camc", "tempc", "sf", "chc", "cq", "tmpcoh", "l3_total")


@dataclass(frozen=True)
class RunReport:
    """One model's scores on one scenario."""

    model: str
    scenario: str
    tier: str
    metrics: Mapping[str, float]


@dataclass
class Summary:
    # (model, tier-or-ALL-or-DELTA, metric) -> value
    values: dict[tuple[str, str, str], float] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, str, str, float]]:
        def order(key):
            model, tier, metric = key
            tier_rank = (0, "") if tier == ALL else (1, tier) if tier in TIERS else (2, tier)
            metric_rank = METRIC_ORDER.index(metric) if metric in METRIC_ORDER else len(METRIC_ORDER)
            return model, tier_rank, metric_rank, metric

        return [(*k, self.values[k]) for k in sorted(self.values, key=order)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "tier", "metric", "value"])
        for model, tier, metric, value in self.rows():
            w.writerow([model, tier, metric, f"{value:.6f}"])
        return buf.getvalue()

    def to_json(self) -> list[dict[str, Any]]:
        return [{"model": m, "tier": t, "metric": k, "value": v} for m, t, k, v in self.rows()]

    def to_markdown(self) -> str:
        metrics = sorted({k[2] for k in self.values}, key=lambda m: (METRIC_ORDER.index(m) if m in METRIC_ORDER else 99, m))
        groups = sorted({(k[0], k[1]) for k in self.values}, key=lambda g: (g[0], g[1] != ALL, g[1] == DELTA, g[1]))
        lines = ["| model | tier | " + " | ".join(metrics) + " |", "|---|---|" + "---|" * len(metrics)]
        for model, tier in groups:
            cells = [
                f"{self.values[(model, tier, m)]:.3f}" if (model, tier, m) in self.values else "" for m in metrics
            ]
            lines.append(f"| {model} | {tier} | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def aggregate_reports(reports: Iterable[RunReport]) -> Summary:
    buckets: dict[tuple[str, str, str], list[float]] = defaultdict(list)
    for r in reports:
        for metric, value in r.metrics.items():
            buckets[(r.model, ALL, metric)].append(float(value))
            buckets[(r.model, r.tier, metric)].append(float(value))
    summary = Summary({k: fmean(v) for k, v in buckets.items()})
    for (model, tier, metric), value in list(summary.values.items()):
        if tier == "S5" and (model, "S1", metric) in summary.values:
            summary.values[(model, DELTA, metric)] = value - summary.values[(model, "S1", metric)]
    return summary
