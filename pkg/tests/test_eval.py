import numpy as np
import pytest

from biknn.dataset import Dataset
from biknn.eval import (
    average_precision,
    precision_at_n,
    roc_auc,
    run_benchmark,
    write_report_csv,
    write_report_json,
)
from biknn.scorer import BiknnParams

from .conftest import labeled_two_gaussian
from .oracles import roc_auc_pairwise


class TestRocAuc:
    def test_perfect_separation(self):
        assert roc_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_interleaved_half(self):
        assert roc_auc([0.9, 0.8, 0.2, 0.1], [1, 0, 0, 1]) == 0.5

    def test_all_tied_half(self):
        assert roc_auc([3.0, 3.0, 3.0, 3.0], [1, 0, 1, 0]) == 0.5

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="both classes"):
            roc_auc([1.0, 2.0], [1, 1])

    def test_matches_pairwise_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            n = int(rng.integers(3, 25))
            labels = rng.integers(0, 2, size=n)
            if labels.min() == labels.max():
                labels[0] = 1 - labels[0]
            scores = np.round(rng.normal(size=n), 1)  # coarse grid provokes ties
            assert roc_auc(scores, labels) == roc_auc_pairwise(scores, labels)

    def test_monotone_transform_invariant(self):
        rng = np.random.default_rng(1)
        scores = rng.normal(size=40)
        labels = rng.integers(0, 2, size=40)
        labels[0], labels[1] = 0, 1
        assert roc_auc(np.exp(scores), labels) == pytest.approx(roc_auc(scores, labels), abs=1e-12)

    def test_negation_complement(self):
        rng = np.random.default_rng(2)
        scores = rng.permutation(30).astype(float)  # distinct, no ties
        labels = rng.integers(0, 2, size=30)
        labels[0], labels[1] = 0, 1
        assert roc_auc(scores, labels) + roc_auc(-scores, labels) == pytest.approx(1.0, abs=1e-12)


class TestAveragePrecision:
    def test_perfect_ranking(self):
        assert average_precision([0.9, 0.8, 0.1], [1, 1, 0]) == 1.0

    def test_hand_evaluated_seven_twelfths(self):
        got = average_precision([0.9, 0.8, 0.7], [0, 1, 1])
        assert got == pytest.approx(7.0 / 12.0, abs=1e-12)

    def test_single_positive_ranked_last(self):
        n = 8
        scores = np.arange(n, 0, -1).astype(float)
        labels = np.zeros(n, int)
        labels[-1] = 1
        assert average_precision(scores, labels) == pytest.approx(1.0 / n, abs=1e-12)

    def test_no_positives_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            average_precision([1.0, 2.0], [0, 0])

    def test_monotone_transform_invariant(self):
        rng = np.random.default_rng(3)
        scores = rng.normal(size=30)
        labels = rng.integers(0, 2, size=30)
        labels[0] = 1
        a = average_precision(scores, labels)
        b = average_precision(3.0 * scores + 7.0, labels)
        assert a == pytest.approx(b, abs=1e-12)

    def test_tie_broken_by_index(self):
        # two tied scores: the earlier index ranks first
        assert average_precision([1.0, 1.0], [1, 0]) == 1.0
        assert average_precision([1.0, 1.0], [0, 1]) == 0.5


class TestPrecisionAtN:
    def test_perfect(self):
        assert precision_at_n([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0], 2) == 1.0

    def test_prevalence_at_full_depth(self):
        rng = np.random.default_rng(4)
        scores = rng.normal(size=20)
        labels = rng.integers(0, 2, size=20)
        assert precision_at_n(scores, labels, 20) == labels.mean()

    def test_hand_case(self):
        assert precision_at_n([3.0, 2.0, 1.0], [1, 0, 1], 2) == 0.5

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            precision_at_n([1.0], [1], 2)


@pytest.fixture(scope="module")
def tiny():
    return labeled_two_gaussian(seed=3, n_each=60, n_outliers=8)


class TestBenchmark:
    def test_protocol_and_determinism(self, tiny):
        params = [("knn", BiknnParams.from_preset("knn", k=10))]
        r1 = run_benchmark([("tiny", tiny)], params, trials=3, train_fraction=0.6, base_seed=5)
        r2 = run_benchmark([("tiny", tiny)], params, trials=3, train_fraction=0.6, base_seed=5)
        assert r1[0].seeds == [5, 6, 7]
        assert r1[0].roc_auc == r2[0].roc_auc
        assert r1[0].ap == r2[0].ap

    def test_single_trial_mean_is_value(self, tiny):
        params = [("biknn1", BiknnParams.from_preset("biknn1", k=10))]
        (rep,) = run_benchmark([("tiny", tiny)], params, trials=1)
        assert rep.mean_roc_auc == rep.roc_auc[0]

    def test_means_are_averages(self, tiny):
        params = [("biknn2", BiknnParams.from_preset("biknn2", k=10))]
        (rep,) = run_benchmark([("tiny", tiny)], params, trials=4)
        assert rep.mean_ap == pytest.approx(float(np.mean(rep.ap)), abs=0)
        assert rep.mean_roc_auc == pytest.approx(float(np.mean(rep.roc_auc)), abs=0)

    def test_unlabeled_rejected(self):
        ds = Dataset(np.random.default_rng(0).normal(size=(30, 2)))
        with pytest.raises(ValueError, match="labels"):
            run_benchmark([("x", ds)], [("knn", BiknnParams(k=5))], trials=1)

    def test_report_files(self, tiny, tmp_path):
        params = [("knn", BiknnParams.from_preset("knn", k=10))]
        reports = run_benchmark([("tiny", tiny)], params, trials=2)
        csv_path = tmp_path / "report.csv"
        json_path = tmp_path / "report.json"
        write_report_csv(reports, csv_path)
        write_report_json(reports, json_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "dataset,params,roc_auc,ap,precision_at_n"
        assert lines[1].startswith("tiny,knn,")
        assert json_path.stat().st_size > 0
