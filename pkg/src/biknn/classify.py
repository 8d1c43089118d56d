"""Bilateral three-type outlier classification in Anomaly Space.

Two per-axis thresholds split the plane into four regions: points above
both thresholds are Type I, above the spatial threshold only Type II,
above the density threshold only Type III, the rest Normal. "Above" means
coordinate >= threshold, so tied points are all included and the labels
depend only on coordinate ranks.
"""

from __future__ import annotations

import csv
from enum import Enum

import numpy as np


class OutlierType(str, Enum):
    NORMAL = "normal"
    TYPE_I = "I"
    TYPE_II = "II"
    TYPE_III = "III"


def axis_thresholds(space: np.ndarray, m: int) -> tuple[float, float]:
    """Per-axis thresholds at the m-th largest k_e and k_p."""
    space = np.atleast_2d(np.asarray(space, dtype=float))
    n = space.shape[0]
    if not 1 <= m < n:
        raise ValueError(f"m={m} out of range (need 1 <= m < n={n})")
    t_e = float(np.sort(space[:, 0])[n - m])
    t_p = float(np.sort(space[:, 1])[n - m])
    return t_e, t_p


def classify_by_thresholds(space: np.ndarray, t_e: float, t_p: float) -> list[OutlierType]:
    """Label each anomaly point against explicit axis thresholds."""
    space = np.atleast_2d(np.asarray(space, dtype=float))
    above_e = space[:, 0] >= t_e
    above_p = space[:, 1] >= t_p
    labels = []
    for ae, ap_ in zip(above_e, above_p):
        if ae and ap_:
            labels.append(OutlierType.TYPE_I)
        elif ae:
            labels.append(OutlierType.TYPE_II)
        elif ap_:
            labels.append(OutlierType.TYPE_III)
        else:
            labels.append(OutlierType.NORMAL)
    return labels


def classify(space: np.ndarray, m: int) -> list[OutlierType]:
    """Label each point using per-axis top-m thresholds."""
    t_e, t_p = axis_thresholds(space, m)
    return classify_by_thresholds(space, t_e, t_p)


def type_counts(labels: list[OutlierType]) -> dict[str, int]:
    """Count labels per type, keyed by the CSV type strings."""
    counts = {t.value: 0 for t in OutlierType}
    for label in labels:
        counts[label.value] += 1
    return counts


def write_classification_csv(path, space: np.ndarray, labels: list[OutlierType]) -> None:
    """Export `id,k_e,k_p,type` with type in {normal,I,II,III}."""
    space = np.atleast_2d(np.asarray(space, dtype=float))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "k_e", "k_p", "type"])
        for i, ((k_e, k_p), label) in enumerate(zip(space, labels)):
            writer.writerow([i, repr(float(k_e)), repr(float(k_p)), label.value])
