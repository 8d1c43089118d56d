"""Ranking metrics and the multi-trial benchmark harness.

roc_auc is the tie-corrected Mann-Whitney statistic; average_precision is
the uninterpolated step-wise AP with ties broken by ascending index;
precision_at_n is the positive fraction among the n_top highest scores.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, split
from .scorer import BiknnParams, fit


def _check_scores_labels(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels, dtype=int).ravel()
    if scores.shape != labels.shape:
        raise ValueError(f"scores and labels differ in length: {len(scores)} vs {len(labels)}")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    return scores, labels


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank (always a half-integer)."""
    order = np.argsort(x, kind="stable")
    sx = x[order]
    ranks = np.empty(len(x), dtype=float)
    bounds = np.flatnonzero(np.r_[True, sx[1:] != sx[:-1], True])
    for g in range(len(bounds) - 1):
        lo, hi = bounds[g], bounds[g + 1]
        ranks[order[lo:hi]] = 0.5 * (lo + 1 + hi)
    return ranks


def roc_auc(scores, labels) -> float:
    """P(random positive outranks random negative), ties counted half."""
    scores, labels = _check_scores_labels(scores, labels)
    pos = int(labels.sum())
    neg = len(labels) - pos
    if pos == 0 or neg == 0:
        raise ValueError("roc_auc needs both classes present")
    rank_sum = _average_ranks(scores)[labels == 1].sum()
    favorable = rank_sum - pos * (pos + 1) / 2.0
    return float(favorable / (pos * neg))


def _descending_order(scores: np.ndarray) -> np.ndarray:
    # primary: score descending; ties: original index ascending
    return np.lexsort((np.arange(len(scores)), -scores))


def average_precision(scores, labels) -> float:
    """Area under the precision-recall step curve (no interpolation)."""
    scores, labels = _check_scores_labels(scores, labels)
    pos = int(labels.sum())
    if pos == 0:
        raise ValueError("average_precision needs at least one positive")
    ranked = labels[_descending_order(scores)]
    cum = np.cumsum(ranked)
    precision = cum / np.arange(1, len(ranked) + 1)
    return float(precision[ranked == 1].sum() / pos)


def precision_at_n(scores, labels, n_top: int) -> float:
    """Fraction of positives among the n_top highest-scored points."""
    scores, labels = _check_scores_labels(scores, labels)
    if not 1 <= n_top <= len(scores):
        raise ValueError(f"n_top={n_top} out of range for {len(scores)} scores")
    ranked = labels[_descending_order(scores)]
    return float(ranked[:n_top].sum() / n_top)


@dataclass
class TrialReport:
    """Per-trial metrics of one (dataset, params) pairing plus their means."""

    dataset: str
    params_name: str
    seeds: list[int]
    roc_auc: list[float] = field(default_factory=list)
    ap: list[float] = field(default_factory=list)
    precision_at_n: list[float] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)

    @property
    def mean_roc_auc(self) -> float:
        return float(np.mean(self.roc_auc))

    @property
    def mean_ap(self) -> float:
        return float(np.mean(self.ap))

    @property
    def mean_precision_at_n(self) -> float:
        return float(np.mean(self.precision_at_n))

    @property
    def mean_seconds(self) -> float:
        return float(np.mean(self.seconds))


def run_benchmark(
    datasets: list[tuple[str, Dataset]],
    params_list: list[tuple[str, BiknnParams]],
    trials: int = 10,
    train_fraction: float = 0.6,
    base_seed: int = 0,
) -> list[TrialReport]:
    """Split/fit/score each dataset under each parameter set over seeded trials.

    Trial t splits with seed base_seed + t, fits on the train rows only,
    scores the held-out test rows and evaluates against the test labels.
    precision@n uses the test split's positive count as the cutoff.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    reports = []
    for ds_name, ds in datasets:
        if ds.labels is None:
            raise ValueError(f"dataset {ds_name!r} has no labels; the benchmark needs them")
        for params_name, params in params_list:
            report = TrialReport(ds_name, params_name, [base_seed + t for t in range(trials)])
            for seed in report.seeds:
                train, test = split(ds, train_fraction, seed)
                if test.labels is None or len(np.unique(test.labels)) < 2:
                    raise ValueError(
                        f"dataset {ds_name!r}, seed {seed}: test split lacks both classes"
                    )
                started = time.perf_counter()
                model = fit(train, params)
                scores = model.score_all(test)
                report.seconds.append(time.perf_counter() - started)
                report.roc_auc.append(roc_auc(scores, test.labels))
                report.ap.append(average_precision(scores, test.labels))
                report.precision_at_n.append(
                    precision_at_n(scores, test.labels, int(test.labels.sum()))
                )
            reports.append(report)
    return reports


def write_report_json(reports: list[TrialReport], path) -> None:
    """Full report: per-trial metrics, means and wall-clock timings."""
    doc = [
        {
            "dataset": r.dataset,
            "params": r.params_name,
            "seeds": r.seeds,
            "per_trial": {
                "roc_auc": r.roc_auc,
                "ap": r.ap,
                "precision_at_n": r.precision_at_n,
                "seconds": r.seconds,
            },
            "means": {
                "roc_auc": r.mean_roc_auc,
                "ap": r.mean_ap,
                "precision_at_n": r.mean_precision_at_n,
                "seconds": r.mean_seconds,
            },
        }
        for r in reports
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def write_report_csv(reports: list[TrialReport], path) -> None:
    """Means-only summary, one row per dataset x params.

    Wall-clock seconds stay in the JSON report so this file is byte-identical
    across reruns with the same flags.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("dataset,params,roc_auc,ap,precision_at_n\n")
        for r in reports:
            fh.write(
                f"{r.dataset},{r.params_name},{r.mean_roc_auc:.9g},"
                f"{r.mean_ap:.9g},{r.mean_precision_at_n:.9g}\n"
            )
