"""Per-dimension empirical CDF model and the projection into [0,1]^d.

The ECDF is the raw right-continuous step function: value(j, x) is the
fraction of training values in dimension j that are <= x. Ties step by
their multiplicity; queries below the training minimum return exactly 0.
"""

from __future__ import annotations

import numpy as np


class EcdfModel:
    """Sorted per-dimension training values defining the ECDF projection."""

    def __init__(self, sorted_columns: np.ndarray):
        cols = np.array(np.atleast_2d(sorted_columns), dtype=float)
        if cols.size == 0:
            raise ValueError("cannot fit an ECDF on an empty matrix")
        if np.any(np.diff(cols, axis=0) < 0):
            raise ValueError("columns must be sorted non-decreasing")
        cols.setflags(write=False)
        self.sorted_columns = cols

    @classmethod
    def fit(cls, points: np.ndarray) -> "EcdfModel":
        """Fit on an (n, d) matrix; stores a sorted copy of each column."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.size == 0:
            raise ValueError("cannot fit an ECDF on an empty matrix")
        if not np.all(np.isfinite(points)):
            raise ValueError("points contain non-finite values")
        return cls(np.sort(points, axis=0))

    @property
    def n(self) -> int:
        return self.sorted_columns.shape[0]

    @property
    def d(self) -> int:
        return self.sorted_columns.shape[1]

    def value(self, j: int, x: float) -> float:
        """ECDF of dimension j at x: (count of training values <= x) / n."""
        if not 0 <= j < self.d:
            raise ValueError(f"dimension {j} out of range for d={self.d}")
        count = np.searchsorted(self.sorted_columns[:, j], x, side="right")
        return float(count) / self.n

    def project(self, x: np.ndarray) -> np.ndarray:
        """Componentwise ECDF image of one point, a d-vector in [0,1]^d."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.d},)")
        return self.project_many(x[None, :])[0]

    def project_many(self, xs: np.ndarray) -> np.ndarray:
        """ECDF image of each row of an (m, d) matrix."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if xs.shape[1] != self.d:
            raise ValueError(f"points have d={xs.shape[1]}, model has d={self.d}")
        out = np.empty_like(xs)
        for j in range(self.d):
            counts = np.searchsorted(self.sorted_columns[:, j], xs[:, j], side="right")
            out[:, j] = counts / self.n
        return out
