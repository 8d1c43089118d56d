import numpy as np
import pytest

from biknn.anomaly_space import build_space
from biknn.classify import (
    OutlierType,
    axis_thresholds,
    classify,
    classify_by_thresholds,
    type_counts,
    write_classification_csv,
)


def space_of(k_e, k_p):
    return np.column_stack([np.asarray(k_e, float), np.asarray(k_p, float)])


class TestAxisThresholds:
    def test_mth_largest(self):
        space = space_of([5, 4, 3, 2, 1], [10, 20, 30, 40, 50])
        assert axis_thresholds(space, 2) == (4.0, 40.0)

    def test_all_equal_ties(self):
        space = space_of([1, 2, 3], [7, 7, 7])
        t_e, t_p = axis_thresholds(space, 1)
        assert t_p == 7.0
        labels = classify(space, 1)
        # every point ties at the density threshold, so all are above it
        assert all(lab in (OutlierType.TYPE_I, OutlierType.TYPE_III) for lab in labels)

    def test_above_count_equals_m_when_distinct(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(3, 40))
            m = int(rng.integers(1, n))
            space = rng.normal(size=(n, 2))
            t_e, t_p = axis_thresholds(space, m)
            assert int((space[:, 0] >= t_e).sum()) == m
            assert int((space[:, 1] >= t_p).sum()) == m

    def test_m_out_of_range(self):
        space = space_of([1, 2], [1, 2])
        with pytest.raises(ValueError):
            axis_thresholds(space, 2)
        with pytest.raises(ValueError):
            axis_thresholds(space, 0)


class TestClassify:
    def test_set_algebra(self):
        # 8 points engineered: ids 0,1 above both; 2,3 spatial only; 4,5 density only
        k_e = [9, 8, 7, 6, 1, 1, 0, 0]
        k_p = [9, 8, 0, 0, 7, 6, 1, 1]
        labels = classify(space_of(k_e, k_p), 4)
        want = ["I", "I", "II", "II", "III", "III", "normal", "normal"]
        assert [lab.value for lab in labels] == want

    def test_count_identities_distinct(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(4, 60))
            m = int(rng.integers(1, n))
            space = rng.normal(size=(n, 2))
            counts = type_counts(classify(space, m))
            assert counts["I"] + counts["II"] == m
            assert counts["I"] + counts["III"] == m

    def test_aligned_rankings_all_type_one(self):
        vals = np.array([5.0, 4.0, 3.0, 2.0, 1.0])
        labels = classify(space_of(vals, vals * 10), 3)
        counts = type_counts(labels)
        assert counts == {"normal": 2, "I": 3, "II": 0, "III": 0}

    def test_monotone_nesting(self):
        rng = np.random.default_rng(2)
        space = rng.normal(size=(40, 2))
        prev_outliers: set[int] = set()
        for m in range(1, 20):
            labels = classify(space, m)
            outliers = {i for i, lab in enumerate(labels) if lab is not OutlierType.NORMAL}
            assert prev_outliers <= outliers
            prev_outliers = outliers

    def test_rank_invariance(self):
        rng = np.random.default_rng(3)
        space = rng.uniform(0.1, 5.0, size=(30, 2))
        before = classify(space, 6)
        warped = space.copy()
        warped[:, 0] = np.log(warped[:, 0])  # strictly increasing on one axis
        assert classify(warped, 6) == before

    def test_fig3a_counts(self, fig3a_dataset):
        space = build_space(fig3a_dataset.features, k=30)
        counts = type_counts(classify(space, 5))
        assert counts == {"normal": 200, "I": 3, "II": 2, "III": 2}

    def test_fig3c_style_larger_m(self):
        # three-cluster variant: more outliers requested, types still partition
        rng = np.random.default_rng(4)
        clusters = np.vstack(
            [
                rng.normal(0.0, 1.0, size=(80, 2)),
                rng.normal(6.0, 0.3, size=(80, 2)),
                rng.normal((-6.0, 6.0), 0.5, size=(80, 2)),
            ]
        )
        space = build_space(clusters, k=30)
        counts = type_counts(classify(space, 13))
        assert counts["I"] + counts["II"] == 13
        assert counts["I"] + counts["III"] == 13


class TestManualThresholds:
    def test_extreme_thresholds_all_normal(self):
        rng = np.random.default_rng(5)
        space = rng.normal(size=(20, 2))
        labels = classify_by_thresholds(space, 1e9, 1e9)
        assert all(lab is OutlierType.NORMAL for lab in labels)

    def test_minimal_thresholds_all_type_one(self):
        rng = np.random.default_rng(6)
        space = rng.normal(size=(20, 2))
        labels = classify_by_thresholds(space, -1e9, -1e9)
        assert all(lab is OutlierType.TYPE_I for lab in labels)


class TestExport:
    def test_csv_format(self, tmp_path):
        space = space_of([1.5, 0.5], [0.25, 2.0])
        labels = classify(space, 1)
        path = tmp_path / "out.csv"
        write_classification_csv(path, space, labels)
        lines = path.read_text().splitlines()
        assert lines[0] == "id,k_e,k_p,type"
        assert lines[1].startswith("0,1.5,0.25,")
        types = {line.split(",")[3] for line in lines[1:]}
        assert types <= {"normal", "I", "II", "III"}
