import json
import math

import numpy as np
import pytest

from biknn.anomaly_space import read_space_csv
from biknn.dataset import load_csv
from biknn.robust_cov import mahalanobis_many
from biknn.scorer import (
    PRESETS,
    BiknnParams,
    decision_threshold,
    fit,
    load_model,
    save_model,
)

from .conftest import FIXTURE_DIR
from .oracles import kth_nn_distance_baseline


def small_model(seed=0, n=60, d=3, k=8, **kw):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, d))
    return fit(pts, BiknnParams(k=k, **kw)), pts


class TestParams:
    def test_defaults(self):
        p = BiknnParams()
        assert (p.k, p.w1, p.w2, p.mu) == (30, 1.0, 0.25, 0.5)

    def test_presets(self):
        assert PRESETS["knn"] == {"w1": 1.0, "w2": 0.0, "mu": 0.0}
        assert PRESETS["biknn1"] == {"w1": 1.0, "w2": 0.25, "mu": 0.5}
        assert PRESETS["biknn2"] == {"w1": 0.5, "w2": 0.5, "mu": 0.5}
        assert PRESETS["biknn3"] == {"w1": 0.0, "w2": 1.0, "mu": 0.0}

    def test_from_preset_overrides(self):
        p = BiknnParams.from_preset("knn", k=10)
        assert p.k == 10 and p.w2 == 0.0 and p.mu == 0.0

    @pytest.mark.parametrize(
        "bad",
        [
            {"mu": 1.5},
            {"mu": -0.1},
            {"k": 0},
            {"w1": -1.0},
            {"w1": 0.0, "w2": 0.0, "mu": 0.5},
            {"agg": "sum"},
            {"p1": 0.5},
            {"support_fraction": 0.4},
        ],
    )
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            BiknnParams(**bad)


class TestFit:
    def test_too_few_rows(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError, match="training rows"):
            fit(rng.normal(size=(30, 2)), BiknnParams(k=30))

    def test_boundary_k_plus_one_ok(self):
        rng = np.random.default_rng(0)
        model = fit(rng.normal(size=(31, 2)), BiknnParams(k=30))
        assert model.train_space.shape == (31, 2)

    def test_deterministic(self):
        m1, pts = small_model(seed=1)
        m2, _ = small_model(seed=1)
        assert np.array_equal(m1.train_space, m2.train_space)
        assert np.array_equal(m1.robust.scatter, m2.robust.scatter)
        rng = np.random.default_rng(9)
        xs = rng.normal(size=(20, 3))
        assert np.array_equal(m1.score_all(xs), m2.score_all(xs))

    def test_golden_fixture_space(self):
        ds = load_csv(FIXTURE_DIR / "two_gaussian.csv")
        model = fit(ds, BiknnParams(k=30))
        golden = read_space_csv(FIXTURE_DIR / "two_gaussian_space.csv")
        assert np.array_equal(model.train_space, golden)


class TestScoreReductions:
    def test_mu_one_is_mahalanobis(self):
        model, _ = small_model(mu=1.0, w1=1.0, w2=1.0)
        rng = np.random.default_rng(2)
        xs = rng.normal(size=(15, 3))
        coords = model.coords_many(xs)
        assert np.array_equal(model.score_all(xs), mahalanobis_many(model.robust, coords))

    def test_mu_zero_w1_only_is_k_e(self):
        model, _ = small_model(mu=0.0, w1=1.0, w2=0.0)
        rng = np.random.default_rng(3)
        xs = rng.normal(size=(15, 3))
        coords = model.coords_many(xs)
        assert model.score_all(xs) == pytest.approx(coords[:, 0], abs=0)

    def test_mu_zero_w2_only_is_k_p(self):
        model, _ = small_model(mu=0.0, w1=0.0, w2=1.0)
        rng = np.random.default_rng(4)
        xs = rng.normal(size=(15, 3))
        coords = model.coords_many(xs)
        assert model.score_all(xs) == pytest.approx(coords[:, 1], abs=0)

    def test_knn_preset_ranking_matches_baseline(self):
        rng = np.random.default_rng(5)
        for trial in range(3):
            n = int(rng.integers(40, 120))
            d = int(rng.integers(1, 5))
            k = int(rng.integers(2, 12))
            pts = rng.normal(size=(n, d))
            model = fit(pts, BiknnParams.from_preset("knn", k=k))
            scores = model.score_train()
            baseline = kth_nn_distance_baseline(pts, k)
            assert np.lexsort((np.arange(n), scores)).tolist() == np.lexsort(
                (np.arange(n), np.asarray(baseline))
            ).tolist()

    def test_weight_scaling_homogeneity(self):
        rng = np.random.default_rng(6)
        xs = rng.normal(size=(10, 3))
        m1, _ = small_model(mu=0.0, w1=1.0, w2=0.25)
        m3, _ = small_model(mu=0.0, w1=3.0, w2=0.75)
        assert m3.score_all(xs) == pytest.approx(3.0 * m1.score_all(xs), rel=1e-12)

    def test_w_monotone_in_coords(self):
        model, _ = small_model(mu=0.0, w1=0.7, w2=0.3)
        base = model.combine(np.array([[1.0, 1.0]]))[0]
        assert model.combine(np.array([[1.5, 1.0]]))[0] >= base
        assert model.combine(np.array([[1.0, 1.5]]))[0] >= base


class TestAnomalyCoords:
    def test_training_duplicate_maps_to_origin(self):
        pts = np.vstack([np.tile([[4.0, 4.0]], (6, 1)), np.random.default_rng(0).normal(size=(10, 2))])
        model = fit(pts, BiknnParams(k=5))
        coords = model.anomaly_coords(np.array([4.0, 4.0]))
        assert (coords.k_e, coords.k_p) == (0.0, 0.0)

    def test_far_point_k_p_bounded(self):
        model, _ = small_model(d=2)
        coords = model.anomaly_coords(np.array([1e6, -1e6]))
        assert coords.k_e > 1e5
        assert coords.k_p <= math.sqrt(2.0) + 1e-12

    def test_train_id_lookup(self):
        model, pts = small_model()
        stored = model.anomaly_coords(None, train_id=3)
        assert (stored.k_e, stored.k_p) == tuple(model.train_space[3])
        # the same row treated as unseen differs: self is not excluded
        unseen = model.anomaly_coords(pts[3])
        assert unseen.k_e <= stored.k_e

    def test_scores_finite_no_nan(self):
        model, pts = small_model()
        assert np.isfinite(model.score_train()).all()
        assert np.isfinite(model.score_all(pts * 100)).all()

    def test_permutation_equivariance(self):
        model, _ = small_model()
        rng = np.random.default_rng(7)
        xs = rng.normal(size=(25, 3))
        perm = rng.permutation(25)
        assert np.array_equal(model.score_all(xs)[perm], model.score_all(xs[perm]))


class TestDecisionThreshold:
    def test_hand_example(self):
        scores = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        t = decision_threshold(scores, 2)
        assert t == 3.0
        assert np.flatnonzero(scores > t).tolist() == [3, 4]

    def test_all_tied(self):
        scores = np.array([1.0, 1.0, 1.0, 1.0])
        t = decision_threshold(scores, 1)
        assert t == 1.0
        assert not np.any(scores > t)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            decision_threshold(np.ones(3), 3)

    def test_distinct_scores_flag_exactly_n(self):
        rng = np.random.default_rng(8)
        scores = rng.permutation(50).astype(float)
        t = decision_threshold(scores, 10)
        assert int((scores > t).sum()) == 10


class TestGrid:
    def test_resolution_two_hits_corners(self):
        model, _ = small_model(d=2)
        grid = model.score_grid([-1.0, -2.0], [3.0, 4.0], 2)
        corners = {
            (0, 0): [-1.0, -2.0],
            (0, 1): [3.0, -2.0],
            (1, 0): [-1.0, 4.0],
            (1, 1): [3.0, 4.0],
        }
        for (i, j), pt in corners.items():
            assert grid[i, j] == model.score_point(np.array(pt))

    def test_requires_2d(self):
        model, _ = small_model(d=3)
        with pytest.raises(ValueError, match="2D"):
            model.score_grid([0, 0], [1, 1], 4)

    def test_two_gaussian_minimum_inside_a_cluster(self):
        ds = load_csv(FIXTURE_DIR / "two_gaussian.csv")
        model = fit(ds, BiknnParams(k=30))
        grid = model.score_grid([-4.0, -4.0], [10.0, 10.0], 40)
        flat = int(np.argmin(grid))
        iy, ix = divmod(flat, 40)
        xs = np.linspace(-4, 10, 40)
        ys = np.linspace(-4, 10, 40)
        best = np.array([xs[ix], ys[iy]])
        near_loose = np.linalg.norm(best - (0.0, 0.0)) < 3.0
        near_tight = np.linalg.norm(best - (6.0, 6.0)) < 1.5
        assert near_loose or near_tight

    def test_bad_bounds(self):
        model, _ = small_model(d=2)
        with pytest.raises(ValueError):
            model.score_grid([1.0, 0.0], [0.0, 1.0], 4)
        with pytest.raises(ValueError):
            model.score_grid([0.0, 0.0], [1.0, 1.0], 1)


class TestModelJson:
    def test_round_trip_scores_identical(self, tmp_path):
        model, pts = small_model(seed=11)
        path = tmp_path / "model.json"
        save_model(model, path)
        back = load_model(path)
        rng = np.random.default_rng(12)
        xs = rng.normal(size=(30, 3))
        assert np.array_equal(back.score_all(xs), model.score_all(xs))
        assert np.array_equal(back.score_train(), model.score_train())
        assert back.params == model.params

    def test_version_field(self, tmp_path):
        model, _ = small_model()
        path = tmp_path / "model.json"
        save_model(model, path)
        doc = json.loads(path.read_text())
        assert doc["version"] == "biknn-model/1"
        assert len(doc["scatter"]) == 4
        assert len(doc["center"]) == 2

    def test_rejects_wrong_version(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"version": "other/9"}')
        with pytest.raises(ValueError, match="unsupported model format"):
            load_model(path)
