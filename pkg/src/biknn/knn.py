"""Exact k-nearest-neighbor search over the training points (blocked brute force).

Queries are exact by construction: distances to all stored points are
computed in blocks and sorted with a stable key, so results are identical
to an exhaustive scan with ties broken by ascending point id.
"""

from __future__ import annotations

import numpy as np

from . import metric

# rows per block when batching queries; bounds peak memory at block*n floats
_BLOCK_ROWS = 64


class NeighborIndex:
    """Immutable index over an (n, d) training matrix under one Minkowski order."""

    def __init__(self, points: np.ndarray, p: float = 2.0):
        points = np.array(np.atleast_2d(points), dtype=float)
        if points.size == 0:
            raise ValueError("cannot index an empty point set")
        if points.ndim != 2:
            raise ValueError(f"points must be 2D, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise ValueError("points contain non-finite values")
        points.setflags(write=False)
        self.points = points
        self.p = metric.validate_p(p)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def _check_k(self, k: int, exclude_self: bool) -> None:
        limit = self.n - 1 if exclude_self else self.n
        if not 1 <= k <= limit:
            raise ValueError(
                f"k={k} out of range (n={self.n}, exclude_self={exclude_self}; max {limit})"
            )

    def query(self, x: np.ndarray, k: int, exclude_self: bool = False) -> list[tuple[int, float]]:
        """The k nearest stored points to x, as (id, distance) pairs.

        Sorted by ascending distance, ties by ascending id. With
        exclude_self, one zero-distance copy (the query point itself) is
        removed before taking k.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise ValueError(f"query point has shape {x.shape}, expected ({self.d},)")
        ids, dists = self.query_many(x[None, :], k, exclude_self)
        return list(zip(ids[0].tolist(), dists[0].tolist()))

    def query_many(
        self, xs: np.ndarray, k: int, exclude_self: bool = False
    ) -> tuple[np.ndarray, np.ndarray]:
        """Batched query: returns (ids, distances), each of shape (len(xs), k)."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if xs.shape[1] != self.d:
            raise ValueError(f"query points have d={xs.shape[1]}, index has d={self.d}")
        self._check_k(k, exclude_self)

        m = xs.shape[0]
        out_ids = np.empty((m, k), dtype=np.int64)
        out_dists = np.empty((m, k), dtype=float)
        for lo in range(0, m, _BLOCK_ROWS):
            hi = min(lo + _BLOCK_ROWS, m)
            dmat = metric.gathered_distances(self.points[None, :, :], xs[lo:hi, None, :], self.p)
            order = np.argsort(dmat, axis=1, kind="stable")
            sorted_d = np.take_along_axis(dmat, order, axis=1)
            # drop one zero-distance copy per row (the query point itself)
            offset = (exclude_self & (sorted_d[:, 0] == 0.0)).astype(np.int64)
            cols = offset[:, None] + np.arange(k)[None, :]
            rows = np.arange(hi - lo)[:, None]
            out_ids[lo:hi] = order[rows, cols]
            out_dists[lo:hi] = sorted_d[rows, cols]
        return out_ids, out_dists
