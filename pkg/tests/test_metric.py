import math

import numpy as np
import pytest

from biknn.metric import distances_to_point, minkowski, norms, validate_p

from .oracles import minkowski_pure

P_GRID = [1.0, 1.5, 2.0, 3.0, math.inf]


def test_345_triangle():
    assert minkowski([0, 0], [3, 4], 2.0) == 5.0


def test_p1_taxicab():
    assert minkowski([0, 0], [3, 4], 1.0) == 7.0


def test_p_inf_chebyshev():
    assert minkowski([0, 0], [3, 4], math.inf) == 4.0


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        minkowski([0, 0], [1, 2, 3], 2.0)


@pytest.mark.parametrize("p", [0.5, 0.0, -1.0, math.nan])
def test_p_below_one_rejected(p):
    with pytest.raises(ValueError, match="p-norm order"):
        validate_p(p)


@pytest.mark.parametrize("p", P_GRID)
def test_symmetry_identity_triangle(p):
    rng = np.random.default_rng(42)
    for _ in range(200):
        d = rng.integers(1, 6)
        a, b, c = rng.normal(size=(3, d)) * 10
        dab = minkowski(a, b, p)
        assert dab == minkowski(b, a, p)
        assert minkowski(a, a, p) == 0.0
        assert dab > 0.0
        assert dab <= minkowski(a, c, p) + minkowski(c, b, p) + 1e-9


@pytest.mark.parametrize("p", P_GRID)
def test_homogeneity(p):
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, b = rng.normal(size=(2, 4))
        c = float(rng.uniform(0.1, 5.0))
        assert minkowski(c * a, c * b, p) == pytest.approx(abs(c) * minkowski(a, b, p), rel=1e-12)


@pytest.mark.parametrize("p", P_GRID)
def test_matches_pure_python(p):
    rng = np.random.default_rng(2)
    for _ in range(200):
        d = rng.integers(1, 8)
        a, b = rng.normal(size=(2, d))
        assert minkowski(a, b, p) == pytest.approx(minkowski_pure(a, b, p), rel=1e-12, abs=1e-15)


def test_distances_to_point_matches_scalar():
    rng = np.random.default_rng(3)
    rows = rng.normal(size=(50, 3))
    x = rng.normal(size=3)
    for p in P_GRID:
        batch = distances_to_point(rows, x, p)
        scalar = np.array([minkowski(r, x, p) for r in rows])
        assert np.array_equal(batch, scalar)


def test_norms_is_distance_to_origin():
    rng = np.random.default_rng(4)
    rows = rng.normal(size=(20, 2))
    for p in P_GRID:
        assert np.array_equal(norms(rows, p), distances_to_point(rows, np.zeros(2), p))
