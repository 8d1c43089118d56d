"""Shared fixtures: synthetic datasets and committed fixture files."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from biknn.dataset import Dataset, load_csv

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def two_gaussian_features(
    rng: np.random.Generator, n_each: int = 100, tight_sigma: float = 0.3
) -> np.ndarray:
    """Two 2D Gaussian blobs of different density, centers (0,0) and (6,6)."""
    loose = rng.normal(0.0, 1.0, size=(n_each, 2))
    tight = rng.normal(6.0, tight_sigma, size=(n_each, 2))
    return np.vstack([loose, tight])


def labeled_two_gaussian(
    seed: int = 7, n_each: int = 500, n_outliers: int = 10
) -> Dataset:
    """The synthetic detection-quality dataset: two blobs + uniform background outliers.

    Outliers are drawn uniformly over [-4, 10]^2, rejecting draws inside the
    cluster cores so they genuinely sit in the background.
    """
    rng = np.random.default_rng(seed)
    feats = two_gaussian_features(rng, n_each=n_each, tight_sigma=0.3)
    outliers = []
    while len(outliers) < n_outliers:
        cand = rng.uniform(-4.0, 10.0, size=2)
        if np.linalg.norm(cand - (0.0, 0.0)) > 3.5 and np.linalg.norm(cand - (6.0, 6.0)) > 1.5:
            outliers.append(cand)
    feats = np.vstack([feats, np.array(outliers)])
    labels = np.r_[np.zeros(2 * n_each, dtype=int), np.ones(n_outliers, dtype=int)]
    return Dataset(feats, labels)


@pytest.fixture(scope="session")
def fig3a_dataset() -> Dataset:
    """Committed fixture tuned so classify(m=5) yields 3 / 2 / 2 outlier types."""
    return load_csv(FIXTURE_DIR / "fig3a.csv")


@pytest.fixture(scope="session")
def detection_dataset() -> Dataset:
    return labeled_two_gaussian()
