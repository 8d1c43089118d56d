"""Minkowski p-norm distances, shared by original space and ECDF space."""

from __future__ import annotations

import math

import numpy as np

INF = math.inf


def validate_p(p: float) -> float:
    """Return the norm order as a float, rejecting anything below 1."""
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"p-norm order must be >= 1 (or inf), got {p}")
    return p


def _reduce_rows(absdiff: np.ndarray, p: float) -> np.ndarray:
    """Norm of each row of a 2D array of absolute differences.

    Every distance in the package goes through this single reduction so
    scalar, per-point and blocked callers produce bit-identical values.
    """
    if p == INF:
        return absdiff.max(axis=1)
    if p == 2.0:
        return np.sqrt((absdiff * absdiff).sum(axis=1))
    if p == 1.0:
        return absdiff.sum(axis=1)
    return (absdiff**p).sum(axis=1) ** (1.0 / p)


def norms(rows: np.ndarray, p: float = 2.0) -> np.ndarray:
    """p-norm of each row of a 2D array."""
    p = validate_p(p)
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2:
        raise ValueError(f"expected a 2D array, got shape {rows.shape}")
    return _reduce_rows(np.abs(rows), p)


def distances_to_point(rows: np.ndarray, x: np.ndarray, p: float = 2.0) -> np.ndarray:
    """Distances from every row of `rows` to the single point `x`."""
    p = validate_p(p)
    rows = np.asarray(rows, dtype=float)
    x = np.asarray(x, dtype=float)
    if rows.ndim != 2 or x.ndim != 1 or rows.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: rows {rows.shape} vs point {x.shape}")
    return _reduce_rows(np.abs(rows - x), p)


def gathered_distances(a: np.ndarray, b: np.ndarray, p: float = 2.0) -> np.ndarray:
    """Row-wise distances between two aligned stacks of points.

    `a` has shape (..., d) and `b` broadcasts against it; the norm is taken
    over the trailing axis. Used for neighbor-gather computations where each
    query row pairs with its own k neighbors.
    """
    p = validate_p(p)
    diff = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    lead = diff.shape[:-1]
    return _reduce_rows(diff.reshape(-1, diff.shape[-1]), p).reshape(lead)


def minkowski(a, b, p: float = 2.0) -> float:
    """(sum_j |a_j - b_j|^p)^(1/p); max_j |a_j - b_j| when p is inf.

    Symmetric, zero iff a == b; requires equal-length finite vectors.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(distances_to_point(a[None, :], b, p)[0])
