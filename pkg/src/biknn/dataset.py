"""CSV-backed numeric datasets and seeded, stratified train/test splitting."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """An input file or dataset violates the format contract."""


@dataclass(frozen=True)
class Dataset:
    """Immutable n x d matrix of finite reals with optional {0,1} outlier labels.

    Attributes:
        features: (n, d) float64 array, all entries finite.
        labels: optional (n,) int array with values in {0, 1} (1 = outlier).
        feature_names: one name per column; auto-named f0..f{d-1} if omitted.
    """

    features: np.ndarray
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        feats = np.array(self.features, dtype=float)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise DataError(f"features must be a non-empty 2D matrix, got shape {feats.shape}")
        if not np.all(np.isfinite(feats)):
            raise DataError("features contain non-finite values")
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)

        if self.labels is not None:
            labels = np.array(self.labels, dtype=int)
            if labels.shape != (feats.shape[0],):
                raise DataError(f"labels length {labels.shape} does not match n={feats.shape[0]}")
            if not np.isin(labels, (0, 1)).all():
                raise DataError("labels must be 0 or 1")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

        names = tuple(self.feature_names) if self.feature_names else tuple(f"f{j}" for j in range(feats.shape[1]))
        if len(names) != feats.shape[1]:
            raise DataError(f"{len(names)} feature names for {feats.shape[1]} columns")
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, idx: np.ndarray) -> "Dataset":
        """New Dataset holding the given rows (order preserved)."""
        labels = self.labels[idx] if self.labels is not None else None
        return Dataset(self.features[idx], labels, self.feature_names)


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Load a Dataset from a UTF-8, comma-separated CSV with a header row.

    All non-label cells must parse as finite reals; label cells must be
    exactly "0" or "1". Errors name the offending data row (1-based) and
    column.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        label_idx: int | None = None
        if label_column is not None:
            if label_column not in header:
                raise DataError(f"{path}: no column named {label_column!r}")
            label_idx = header.index(label_column)
        feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
        if not feature_names:
            raise DataError(f"{path}: no feature columns")

        rows: list[list[float]] = []
        labels: list[int] = []
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: row {rownum} has {len(row)} cells, expected {len(header)}")
            vals = []
            for colnum, cell in enumerate(row):
                name = header[colnum]
                if colnum == label_idx:
                    cell = cell.strip()
                    if cell not in ("0", "1"):
                        raise DataError(
                            f"{path}: row {rownum}, column {name!r}: label must be 0 or 1, got {cell!r}"
                        )
                    labels.append(int(cell))
                else:
                    try:
                        v = float(cell)
                    except ValueError:
                        raise DataError(
                            f"{path}: row {rownum}, column {name!r}: not a number: {cell.strip()!r}"
                        ) from None
                    if not math.isfinite(v):
                        raise DataError(f"{path}: row {rownum}, column {name!r}: non-finite value")
                    vals.append(v)
            rows.append(vals)
        if not rows:
            raise DataError(f"{path}: no data rows")

    feats = np.array(rows, dtype=float)
    lab = np.array(labels, dtype=int) if label_idx is not None else None
    return Dataset(feats, lab, feature_names)


def save_csv(ds: Dataset, path, label_column: str | None = None) -> None:
    """Write a Dataset to CSV at full float precision (round-trips exactly)."""
    if ds.labels is not None and label_column is None:
        label_column = "label"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = list(ds.feature_names)
        if ds.labels is not None:
            header.append(label_column)
        writer.writerow(header)
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.features[i]]
            if ds.labels is not None:
                row.append(str(int(ds.labels[i])))
            writer.writerow(row)


def split(ds: Dataset, train_fraction: float, seed: int, stratified: bool = True) -> tuple[Dataset, Dataset]:
    """Seeded partition into (train, test) with |train| = round(train_fraction * n).

    When labels are present and `stratified` is true, the draw apportions the
    train budget across classes by largest-remainder rounding and guarantees
    every nonempty class at least one train member when the budget allows.
    Deterministic for fixed (ds, train_fraction, seed).
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = ds.n
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    train_size = min(max(int(round(train_fraction * n)), 1), n - 1)
    rng = np.random.default_rng(seed)

    if stratified and ds.labels is not None:
        picked = _stratified_pick(ds.labels, train_size, rng)
    else:
        picked = rng.permutation(n)[:train_size]

    mask = np.zeros(n, dtype=bool)
    mask[picked] = True
    return ds.subset(np.flatnonzero(mask)), ds.subset(np.flatnonzero(~mask))


def _stratified_pick(labels: np.ndarray, train_size: int, rng: np.random.Generator) -> np.ndarray:
    classes = sorted(int(c) for c in np.unique(labels))
    counts = {c: int((labels == c).sum()) for c in classes}
    n = len(labels)

    quotas = {c: train_size * counts[c] / n for c in classes}
    alloc = {c: int(math.floor(quotas[c])) for c in classes}
    leftover = train_size - sum(alloc.values())
    # hand leftover seats to the largest fractional remainders, ties to the smaller class id
    for c in sorted(classes, key=lambda c: (-(quotas[c] - alloc[c]), c))[:leftover]:
        alloc[c] += 1

    # keep every class represented in train when the budget allows
    if train_size >= len(classes):
        for c in classes:
            while alloc[c] == 0 and counts[c] >= 1:
                donor = max(classes, key=lambda d: (alloc[d], -d))
                if alloc[donor] < 2:
                    break
                alloc[donor] -= 1
                alloc[c] += 1

    picked = []
    for c in classes:
        idx_c = np.flatnonzero(labels == c)
        picked.append(rng.permutation(idx_c)[: alloc[c]])
    return np.concatenate(picked)
