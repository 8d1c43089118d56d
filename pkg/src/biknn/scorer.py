"""The BikNN estimator: fit, combined scoring, thresholds, grids, model I/O.

A fitted model scores a point x by
    S(x) = mu * M(x) + (1 - mu) * W(x)
where M is the Mahalanobis distance of x's anomaly coordinates from the
robust (MCD) center, and W = ||(w1 * k_e, w2 * k_p)||_wp is the weighted
Minkowski anomaly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from typing import Union

import numpy as np

from . import metric
from .anomaly_space import AGGREGATORS, AnomalyPoint, space_from_models
from .dataset import Dataset
from .ecdf import EcdfModel
from .knn import NeighborIndex
from .robust_cov import RobustLocationScatter, fast_mcd, mahalanobis_many

MODEL_FORMAT = "biknn-model/1"

# Named parameter presets. The combined score implements S = mu*M + (1-mu)*W
# literally, so the kNN-equivalent and density-only behaviors live at mu=0
# (the W branch); biknn1/biknn2 use the published benchmark settings.
PRESETS: dict[str, dict[str, float]] = {
    "knn": {"w1": 1.0, "w2": 0.0, "mu": 0.0},
    "biknn1": {"w1": 1.0, "w2": 0.25, "mu": 0.5},
    "biknn2": {"w1": 0.5, "w2": 0.5, "mu": 0.5},
    "biknn3": {"w1": 0.0, "w2": 1.0, "mu": 0.0},
}

ArrayOrDataset = Union[np.ndarray, Dataset]


@dataclass(frozen=True)
class BiknnParams:
    """Estimator parameters; defaults follow the biknn1 preset with k=30."""

    k: int = 30
    p1: float = 2.0
    p2: float = 2.0
    agg: str = "max"
    w1: float = 1.0
    w2: float = 0.25
    wp: float = 2.0
    mu: float = 0.5
    support_fraction: float | None = None
    seed: int = 0
    agg_spatial: str | None = None
    agg_density: str | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        metric.validate_p(self.p1)
        metric.validate_p(self.p2)
        metric.validate_p(self.wp)
        for name in ("agg", "agg_spatial", "agg_density"):
            val = getattr(self, name)
            if val is not None and val not in AGGREGATORS:
                raise ValueError(f"{name} must be one of {AGGREGATORS}, got {val!r}")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must be in [0, 1], got {self.mu}")
        if self.w1 < 0 or self.w2 < 0:
            raise ValueError("w1 and w2 must be >= 0")
        if self.mu < 1.0 and self.w1 == 0.0 and self.w2 == 0.0:
            raise ValueError("w1 and w2 cannot both be 0 when mu < 1")
        if self.support_fraction is not None and not 0.5 < self.support_fraction <= 1.0:
            raise ValueError(f"support_fraction must be in (0.5, 1], got {self.support_fraction}")

    @property
    def effective_agg_spatial(self) -> str:
        return self.agg_spatial or self.agg

    @property
    def effective_agg_density(self) -> str:
        return self.agg_density or self.agg

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "BiknnParams":
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
        merged = dict(PRESETS[name])
        merged.update(overrides)
        return cls(**merged)


def _features(data: ArrayOrDataset) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.features
    return np.atleast_2d(np.asarray(data, dtype=float))


@dataclass
class BiknnModel:
    """Fitted bundle: neighbor index, ECDF model, anomaly space, robust scatter."""

    index: NeighborIndex
    ecdf: EcdfModel
    train_space: np.ndarray
    robust: RobustLocationScatter
    params: BiknnParams

    def __post_init__(self) -> None:
        self.train_space = np.array(np.atleast_2d(self.train_space), dtype=float)
        self.train_space.setflags(write=False)
        # projections of the training rows, reused by every scoring call
        self._proj_train = self.ecdf.project_many(self.index.points)

    @property
    def n_train(self) -> int:
        return self.index.n

    @property
    def d(self) -> int:
        return self.index.d

    def coords_many(self, data: ArrayOrDataset) -> np.ndarray:
        """Anomaly-space coordinates (m, 2) of rows treated as unseen points."""
        xs = _features(data)
        p = self.params
        return space_from_models(
            self.index,
            self.ecdf,
            xs,
            p.k,
            p.effective_agg_spatial,
            p.effective_agg_density,
            p.p2,
            exclude_self=False,
        )

    def anomaly_coords(self, x: np.ndarray, train_id: int | None = None) -> AnomalyPoint:
        """(k_e, k_p) of one point; a known training row can be fetched by id."""
        if train_id is not None:
            k_e, k_p = self.train_space[train_id]
            return AnomalyPoint(float(k_e), float(k_p))
        coords = self.coords_many(np.asarray(x, dtype=float)[None, :])
        return AnomalyPoint(float(coords[0, 0]), float(coords[0, 1]))

    def combine(self, space: np.ndarray) -> np.ndarray:
        """Combined score mu*M + (1-mu)*W for each anomaly-space row."""
        space = np.atleast_2d(np.asarray(space, dtype=float))
        p = self.params
        m_part = mahalanobis_many(self.robust, space)
        weighted = np.column_stack([p.w1 * space[:, 0], p.w2 * space[:, 1]])
        w_part = metric.norms(weighted, p.wp)
        return p.mu * m_part + (1.0 - p.mu) * w_part

    def score_point(self, x: np.ndarray) -> float:
        """Combined anomaly score of one unseen point."""
        return float(self.score_all(np.asarray(x, dtype=float)[None, :])[0])

    def score_all(self, data: ArrayOrDataset) -> np.ndarray:
        """Combined scores for each row, input order preserved."""
        return self.combine(self.coords_many(data))

    def score_train(self) -> np.ndarray:
        """Scores of the training rows via their fit-time (self-excluded) coordinates."""
        return self.combine(self.train_space)

    def score_grid(self, mins, maxs, resolution: int) -> np.ndarray:
        """Scores on a resolution x resolution grid (2D models only).

        Row i holds y = ys[i], column j holds x = xs[j]; flattened row-major
        the x coordinate varies fastest.
        """
        if self.d != 2:
            raise ValueError(f"score_grid requires a 2D model, got d={self.d}")
        if resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {resolution}")
        mins = np.asarray(mins, dtype=float)
        maxs = np.asarray(maxs, dtype=float)
        if mins.shape != (2,) or maxs.shape != (2,) or not np.all(mins < maxs):
            raise ValueError("need componentwise mins < maxs")
        xs = np.linspace(mins[0], maxs[0], resolution)
        ys = np.linspace(mins[1], maxs[1], resolution)
        xx, yy = np.meshgrid(xs, ys)
        pts = np.column_stack([xx.ravel(), yy.ravel()])
        return self.score_all(pts).reshape(resolution, resolution)


def fit(train: ArrayOrDataset, params: BiknnParams | None = None) -> BiknnModel:
    """Fit a BikNN model: index + ECDF + self-excluded anomaly space + MCD."""
    params = params or BiknnParams()
    feats = _features(train)
    n = feats.shape[0]
    if n < max(params.k + 1, 5):
        raise ValueError(f"need at least max(k+1, 5) = {max(params.k + 1, 5)} training rows, got {n}")
    index = NeighborIndex(feats, params.p1)
    model = EcdfModel.fit(feats)
    train_space = space_from_models(
        index,
        model,
        feats,
        params.k,
        params.effective_agg_spatial,
        params.effective_agg_density,
        params.p2,
        exclude_self=True,
    )
    robust = fast_mcd(train_space, params.support_fraction, params.seed)
    return BiknnModel(index, model, train_space, robust, params)


def decision_threshold(scores: np.ndarray, n_outliers: int) -> float:
    """The (n - n_outliers)-th smallest score; strictly greater means outlier.

    With ties at the threshold fewer than n_outliers points may be flagged.
    """
    scores = np.asarray(scores, dtype=float).ravel()
    if not 1 <= n_outliers < len(scores):
        raise ValueError(f"n_outliers={n_outliers} out of range for {len(scores)} scores")
    return float(np.sort(scores)[len(scores) - n_outliers - 1])


def save_model(model: BiknnModel, path) -> None:
    """Serialize a fitted model to JSON (sufficient to reload and score identically)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(model), fh)
        fh.write("\n")


def to_json_dict(model: BiknnModel) -> dict:
    return {
        "version": MODEL_FORMAT,
        "params": asdict(model.params),
        "center": model.robust.center.tolist(),
        "scatter": model.robust.scatter.ravel().tolist(),
        "support": model.robust.support.astype(int).tolist(),
        "raw_determinant": model.robust.raw_determinant,
        "degenerate": model.robust.degenerate,
        "train_space": {
            "k_e": model.train_space[:, 0].tolist(),
            "k_p": model.train_space[:, 1].tolist(),
        },
        "ecdf": [col.tolist() for col in model.ecdf.sorted_columns.T],
        "train": model.index.points.tolist(),
    }


def load_model(path) -> BiknnModel:
    """Reload a model written by save_model."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != MODEL_FORMAT:
        raise ValueError(f"unsupported model format: {doc.get('version')!r}")
    params = BiknnParams(**doc["params"])
    train = np.array(doc["train"], dtype=float)
    index = NeighborIndex(train, params.p1)
    ecdf_model = EcdfModel(np.array(doc["ecdf"], dtype=float).T)
    train_space = np.column_stack(
        [np.array(doc["train_space"]["k_e"], dtype=float), np.array(doc["train_space"]["k_p"], dtype=float)]
    )
    robust = RobustLocationScatter(
        np.array(doc["center"], dtype=float),
        np.array(doc["scatter"], dtype=float).reshape(2, 2),
        np.array(doc["support"], dtype=bool),
        float(doc["raw_determinant"]),
        bool(doc.get("degenerate", False)),
    )
    return BiknnModel(index, ecdf_model, train_space, robust, params)


def params_from_cli(preset: str | None, **overrides) -> BiknnParams:
    """Build params from an optional preset plus explicit overrides."""
    clean = {k: v for k, v in overrides.items() if v is not None}
    if preset is not None:
        conflict = set(clean) & {"w1", "w2", "mu"}
        if conflict:
            raise ValueError(f"--preset conflicts with explicit {sorted(conflict)}")
        return BiknnParams.from_preset(preset, **clean)
    return replace(BiknnParams(), **clean)
