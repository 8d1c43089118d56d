"""Minimum Covariance Determinant estimation over 2D anomaly points.

Implements the randomized FastMCD construction (random elemental starts
refined by C-steps) plus an exhaustive enumeration mode for small inputs,
with the usual median-based consistency rescaling so the scatter
approximates a covariance under Gaussian inliers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

# median of the chi-square distribution with 2 degrees of freedom
# (its CDF is 1 - exp(-x/2), so the median solves exp(-x/2) = 1/2)
CHI2_2_MEDIAN = 2.0 * math.log(2.0)

_N_STARTS = 500
_N_KEEP = 10
_N_INITIAL_CSTEPS = 2
_MAX_REFINE_ITER = 100
_DET_TOL = 1e-12
_SINGULAR_DET = 1e-24
_EXACT_LIMIT = 20


@dataclass(frozen=True)
class RobustLocationScatter:
    """Robust center and 2x2 scatter fitted on anomaly points.

    Attributes:
        center: robust location, shape (2,).
        scatter: symmetric positive-definite 2x2 matrix (consistency-rescaled).
        support: boolean mask of the h points the estimate was computed from.
        raw_determinant: determinant of the support covariance before rescaling.
        degenerate: true when the input forced an artificial regularization.
    """

    center: np.ndarray
    scatter: np.ndarray
    support: np.ndarray
    raw_determinant: float
    degenerate: bool = False
    _inv: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        center = np.array(self.center, dtype=float).reshape(2)
        scatter = np.array(self.scatter, dtype=float).reshape(2, 2)
        support = np.array(self.support, dtype=bool)
        det = scatter[0, 0] * scatter[1, 1] - scatter[0, 1] * scatter[1, 0]
        if det <= 0 or scatter[0, 0] <= 0 or scatter[1, 1] <= 0:
            raise ValueError("scatter must be symmetric positive definite")
        inv = np.array(
            [[scatter[1, 1], -scatter[0, 1]], [-scatter[1, 0], scatter[0, 0]]], dtype=float
        ) / det
        for name, val in (("center", center), ("scatter", scatter), ("support", support), ("_inv", inv)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def h(self) -> int:
        return int(self.support.sum())


def mahalanobis(ls: RobustLocationScatter, v: np.ndarray) -> float:
    """sqrt((v - center)^T scatter^-1 (v - center)); zero iff v == center."""
    return float(mahalanobis_many(ls, np.asarray(v, dtype=float)[None, :])[0])


def mahalanobis_many(ls: RobustLocationScatter, vs: np.ndarray) -> np.ndarray:
    """Mahalanobis distance of each row of an (m, 2) array."""
    vs = np.atleast_2d(np.asarray(vs, dtype=float))
    if vs.shape[1] != 2:
        raise ValueError(f"expected (m, 2) points, got shape {vs.shape}")
    dx = vs[:, 0] - ls.center[0]
    dy = vs[:, 1] - ls.center[1]
    inv = ls._inv
    q = inv[0, 0] * dx * dx + (inv[0, 1] + inv[1, 0]) * dx * dy + inv[1, 1] * dy * dy
    return np.sqrt(np.maximum(q, 0.0))


def _location_scatter(points: np.ndarray, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and covariance (ddof=1) of the selected rows."""
    sub = points[idx]
    center = sub.mean(axis=0)
    diff = sub - center
    cov = diff.T @ diff / (len(idx) - 1)
    return center, cov


def _det2(cov: np.ndarray) -> float:
    return float(cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0])


def _sq_dists(points: np.ndarray, center: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """Squared Mahalanobis distances, regularizing a singular cov for ranking."""
    det = _det2(cov)
    if det < _SINGULAR_DET:
        eps = 1e-9 * (cov[0, 0] + cov[1, 1]) / 2.0
        if eps <= 0:
            eps = 1e-9
        cov = cov + eps * np.eye(2)
        det = _det2(cov)
    inv = np.array([[cov[1, 1], -cov[0, 1]], [-cov[1, 0], cov[0, 0]]]) / det
    dx = points[:, 0] - center[0]
    dy = points[:, 1] - center[1]
    return inv[0, 0] * dx * dx + (inv[0, 1] + inv[1, 0]) * dx * dy + inv[1, 1] * dy * dy


def c_step(points: np.ndarray, subset: np.ndarray) -> np.ndarray:
    """One concentration step: keep the h points closest to the subset's estimate.

    The returned subset's covariance determinant never exceeds the input
    subset's (the classical monotonicity guarantee).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    subset = np.asarray(subset, dtype=np.int64)
    h = len(subset)
    if h < 3:
        raise ValueError(f"subset size {h} too small for a 2D covariance (need >= 3)")
    if subset.min() < 0 or subset.max() >= len(points):
        raise ValueError("subset indices out of range")
    center, cov = _location_scatter(points, subset)
    d2 = _sq_dists(points, center, cov)
    order = np.lexsort((np.arange(len(points)), d2))
    return np.sort(order[:h])


def _refine(points: np.ndarray, subset: np.ndarray, max_iter: int) -> tuple[float, np.ndarray]:
    """Iterate C-steps until the determinant stalls; returns (det, subset)."""
    det = _det2(_location_scatter(points, subset)[1])
    for _ in range(max_iter):
        nxt = c_step(points, subset)
        nxt_det = _det2(_location_scatter(points, nxt)[1])
        if np.array_equal(nxt, subset) or abs(det - nxt_det) < _DET_TOL:
            return nxt_det, nxt
        subset, det = nxt, nxt_det
    return det, subset


def default_h(m: int, support_fraction: float | None = None) -> int:
    """MCD subset size: floor((m+3)/2) by default, at least that with a fraction."""
    base = (m + 3) // 2
    if support_fraction is None:
        return base
    if not 0.5 < support_fraction <= 1.0:
        raise ValueError(f"support_fraction must be in (0.5, 1], got {support_fraction}")
    return max(int(math.floor(m * support_fraction)), base)


def _enumerate_best(points: np.ndarray, h: int) -> tuple[float, np.ndarray]:
    """Exhaustive search over all size-h subsets (lexicographic tie-break)."""
    m = len(points)
    best_det = math.inf
    best: np.ndarray | None = None
    combos = itertools.combinations(range(m), h)
    while True:
        chunk = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, 4096)), dtype=np.int64
        ).reshape(-1, h)
        if chunk.size == 0:
            break
        sub = points[chunk]  # (c, h, 2)
        mean = sub.mean(axis=1, keepdims=True)
        diff = sub - mean
        sxx = (diff[:, :, 0] * diff[:, :, 0]).sum(axis=1)
        syy = (diff[:, :, 1] * diff[:, :, 1]).sum(axis=1)
        sxy = (diff[:, :, 0] * diff[:, :, 1]).sum(axis=1)
        dets = (sxx * syy - sxy * sxy) / float((h - 1) ** 2)
        i = int(np.argmin(dets))
        # strict < keeps the lexicographically first subset among exact ties
        if dets[i] < best_det:
            best_det = float(dets[i])
            best = chunk[i]
    assert best is not None
    return best_det, np.asarray(best, dtype=np.int64)


def fast_mcd(
    points: np.ndarray,
    support_fraction: float | None = None,
    seed: int = 0,
    mode: str = "fast",
) -> RobustLocationScatter:
    """Robust location/scatter of (m, 2) points by minimum covariance determinant.

    mode="fast" runs the randomized FastMCD loop (500 elemental starts, 2
    C-steps each, the 10 best refined to convergence); mode="exact"
    enumerates every size-h subset and is only permitted for m <= 20.
    The winning subset's covariance is rescaled by median(d_i^2) / chi2_2(0.5)
    for consistency at the Gaussian, then diagonal-regularized if needed.
    Deterministic for fixed (points, support_fraction, seed).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m = points.shape[0]
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError(f"expected (m, 2) points, got shape {points.shape}")
    if m < 5:
        raise ValueError(f"need at least 5 points, got {m}")
    if mode not in ("fast", "exact"):
        raise ValueError(f"mode must be 'fast' or 'exact', got {mode!r}")
    h = default_h(m, support_fraction)

    if np.all(points == points[0]):
        support = np.zeros(m, dtype=bool)
        support[:h] = True
        scatter = 1e-9 * np.eye(2)
        return RobustLocationScatter(points[0].copy(), scatter, support, _det2(scatter), degenerate=True)

    if h == m:
        best = np.arange(m, dtype=np.int64)
        best_det = _det2(_location_scatter(points, best)[1])
    elif mode == "exact":
        if m > _EXACT_LIMIT:
            raise ValueError(f"exact mode enumerates C(m, h); m={m} exceeds limit {_EXACT_LIMIT}")
        best_det, best = _enumerate_best(points, h)
    else:
        best_det, best = _fast_search(points, h, seed)

    center, cov = _location_scatter(points, best)
    raw_det = _det2(cov)
    degenerate = False
    if raw_det < _SINGULAR_DET:
        eps = 1e-9 * (cov[0, 0] + cov[1, 1]) / 2.0
        if eps <= 0:
            eps = 1e-9
        cov = cov + eps * np.eye(2)
        degenerate = True

    d2 = _sq_dists(points, center, cov)
    correction = float(np.median(d2)) / CHI2_2_MEDIAN
    if correction > 0:
        scatter = cov * correction
    else:  # over half the points sit exactly at the center
        scatter = cov
        degenerate = True
    if _det2(scatter) < _SINGULAR_DET:
        scatter = scatter + 1e-9 * np.eye(2)
        degenerate = True

    support = np.zeros(m, dtype=bool)
    support[best] = True
    return RobustLocationScatter(center, scatter, support, raw_det, degenerate)


def _fast_search(points: np.ndarray, h: int, seed: int) -> tuple[float, np.ndarray]:
    """Randomized FastMCD subset search; returns (determinant, support indices)."""
    m = len(points)
    rng = np.random.default_rng(seed)
    candidates: list[tuple[float, tuple[int, ...]]] = []
    for _ in range(_N_STARTS):
        elemental = rng.choice(m, size=3, replace=False)
        # grow a singular elemental start until its covariance is usable
        while _det2(_location_scatter(points, elemental)[1]) < _SINGULAR_DET and len(elemental) < m:
            extra = rng.integers(m)
            if extra not in elemental:
                elemental = np.append(elemental, extra)
        center, cov = _location_scatter(points, elemental)
        d2 = _sq_dists(points, center, cov)
        subset = np.sort(np.lexsort((np.arange(m), d2))[:h])
        for _ in range(_N_INITIAL_CSTEPS):
            subset = c_step(points, subset)
        det = _det2(_location_scatter(points, subset)[1])
        candidates.append((det, tuple(subset.tolist())))

    candidates.sort(key=lambda c: (c[0], c[1]))
    seen: set[tuple[int, ...]] = set()
    best_det, best = math.inf, None
    for _, subset in candidates:
        if subset in seen:
            continue
        seen.add(subset)
        final_det, final = _refine(points, np.asarray(subset, dtype=np.int64), _MAX_REFINE_ITER)
        key = (final_det, tuple(final.tolist()))
        if best is None or key < (best_det, tuple(best.tolist())):
            best_det, best = final_det, final
        if len(seen) >= _N_KEEP:
            break
    assert best is not None
    return best_det, best
