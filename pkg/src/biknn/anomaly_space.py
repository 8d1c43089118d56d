"""The 2D Anomaly Space: per-point spatial and density anomalies.

Both coordinates derive from ONE neighborhood found in the original space:
k_e aggregates the original-space distances to the k neighbors, k_p
aggregates the ECDF-space distances to those same neighbors.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from . import metric
from .ecdf import EcdfModel
from .knn import NeighborIndex

AGGREGATORS = ("max", "mean", "median")


def _max_threads() -> int:
    """Worker cap from BIKNN_THREADS (default 1; results identical either way)."""
    try:
        return max(1, int(os.environ.get("BIKNN_THREADS", "1")))
    except ValueError:
        return 1


class AnomalyPoint(NamedTuple):
    """One observation's coordinates in Anomaly Space."""

    k_e: float
    k_p: float


def aggregate(values: np.ndarray, kind: str) -> np.ndarray:
    """Apply the chosen aggregator along the last axis (the k neighbors)."""
    if kind == "max":
        return np.asarray(values).max(axis=-1)
    if kind == "mean":
        return np.asarray(values).mean(axis=-1)
    if kind == "median":
        return np.median(np.asarray(values), axis=-1)
    raise ValueError(f"unknown aggregator {kind!r}; expected one of {AGGREGATORS}")


def spatial_anomaly(
    index: NeighborIndex, x: np.ndarray, k: int, agg: str = "max", exclude_self: bool = False
) -> float:
    """Aggregated original-space distance from x to its k nearest neighbors.

    With agg="max" this is the classical kth-nearest-neighbor distance.
    """
    _, dists = index.query_many(np.asarray(x, dtype=float)[None, :], k, exclude_self)
    return float(aggregate(dists, agg)[0])


def density_anomaly(
    index: NeighborIndex,
    ecdf: EcdfModel,
    x: np.ndarray,
    k: int,
    agg: str = "max",
    p2: float = 2.0,
    exclude_self: bool = False,
) -> float:
    """Aggregated ECDF-space distance from x to its ORIGINAL-space neighbors.

    The neighborhood comes from `index` (original space); only the distances
    are measured between ECDF projections.
    """
    if ecdf.d != index.d:
        raise ValueError(f"ecdf d={ecdf.d} does not match index d={index.d}")
    x = np.asarray(x, dtype=float)
    ids, _ = index.query_many(x[None, :], k, exclude_self)
    proj_x = ecdf.project(x)
    proj_nb = ecdf.project_many(index.points[ids[0]])
    gaps = metric.distances_to_point(proj_nb, proj_x, p2)
    return float(aggregate(gaps[None, :], agg)[0])


def space_from_models(
    index: NeighborIndex,
    ecdf: EcdfModel,
    xs: np.ndarray,
    k: int,
    agg_e: str = "max",
    agg_p: str = "max",
    p2: float = 2.0,
    exclude_self: bool = False,
) -> np.ndarray:
    """Anomaly coordinates for each row of xs, sharing one neighbor query.

    Returns an (m, 2) array with column 0 = k_e and column 1 = k_p, row
    order matching xs.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    proj_train = ecdf.project_many(index.points)
    out = np.empty((xs.shape[0], 2), dtype=float)

    def fill(lo: int, hi: int) -> None:
        ids, dists = index.query_many(xs[lo:hi], k, exclude_self)
        out[lo:hi, 0] = aggregate(dists, agg_e)
        proj_x = ecdf.project_many(xs[lo:hi])
        gaps = metric.gathered_distances(proj_train[ids], proj_x[:, None, :], p2)
        out[lo:hi, 1] = aggregate(gaps, agg_p)

    workers = _max_threads()
    m = xs.shape[0]
    if workers == 1 or m < 2 * workers:
        fill(0, m)
    else:
        step = -(-m // workers)
        blocks = [(lo, min(lo + step, m)) for lo in range(0, m, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: fill(*b), blocks))
    return out


def build_space(
    points: np.ndarray,
    k: int,
    agg: str = "max",
    p1: float = 2.0,
    p2: float = 2.0,
    agg_density: str | None = None,
) -> np.ndarray:
    """Anomaly Space of a training matrix (self-excluded neighborhoods).

    Convenience wrapper that fits the index and ECDF itself; requires
    k <= n - 1.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if k >= points.shape[0]:
        raise ValueError(f"k={k} must be < n={points.shape[0]} for a self-excluded space")
    index = NeighborIndex(points, p1)
    model = EcdfModel.fit(points)
    return space_from_models(
        index, model, points, k, agg, agg_density or agg, p2, exclude_self=True
    )


def write_space_csv(path, space: np.ndarray) -> None:
    """Export an anomaly space as `id,k_e,k_p` (full float precision)."""
    space = np.atleast_2d(np.asarray(space, dtype=float))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "k_e", "k_p"])
        for i, (k_e, k_p) in enumerate(space):
            writer.writerow([i, repr(float(k_e)), repr(float(k_p))])


def read_space_csv(path) -> np.ndarray:
    """Load an `id,k_e,k_p` CSV back into an (n, 2) array ordered by id."""
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for rec in reader:
            if rec:
                rows[int(rec[0])] = (float(rec[1]), float(rec[2]))
    return np.array([rows[i] for i in range(len(rows))], dtype=float)
