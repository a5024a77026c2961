import itertools
import random

import pytest

from edurec.dataset import GeneratorConfig, generate_synthetic
from edurec.evaluation import (
    AlgorithmSpec,
    EvaluationError,
    accuracy,
    build_confusion_matrix,
    compare_algorithms,
    comparison_csv,
    comparison_table,
    evaluate_holdout,
    format_report,
    macro_f_measure,
    precision_recall_f,
)

HAND_TALLY_TRUTHS = ["A", "A", "B", "B", "B"]
HAND_TALLY_PREDS = ["A", "B", "B", "B", "A"]


class TestConfusionMatrix:
    def test_perfect_predictions_are_diagonal(self):
        cm = build_confusion_matrix(["A", "B", "A"], ["A", "B", "A"])
        assert cm.labels == ("A", "B")
        assert cm.counts == ((2, 0), (0, 1))

    def test_hand_tally(self):
        cm = build_confusion_matrix(HAND_TALLY_TRUTHS, HAND_TALLY_PREDS)
        assert cm.counts == ((1, 1), (1, 2))

    def test_single_instance(self):
        cm = build_confusion_matrix(["A"], ["A"])
        assert cm.labels == ("A",)
        assert cm.counts == ((1,),)
        assert cm.total == 1

    def test_labels_are_sorted_union(self):
        cm = build_confusion_matrix(["B"], ["C"])
        assert cm.labels == ("B", "C")

    def test_length_mismatch(self):
        with pytest.raises(EvaluationError, match="mismatch"):
            build_confusion_matrix(["A"], ["A", "B"])

    def test_empty_input(self):
        with pytest.raises(EvaluationError):
            build_confusion_matrix([], [])

    def test_one_vs_rest_terms(self):
        cm = build_confusion_matrix(HAND_TALLY_TRUTHS, HAND_TALLY_PREDS)
        a, b = 0, 1
        assert (cm.tp(a), cm.fp(a), cm.fn(a), cm.tn(a)) == (1, 1, 1, 2)
        assert (cm.tp(b), cm.fp(b), cm.fn(b), cm.tn(b)) == (2, 1, 1, 1)

    def test_totals_always_balance(self):
        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(1, 40)
            labels = "ABC"
            truths = [rng.choice(labels) for _ in range(n)]
            preds = [rng.choice(labels) for _ in range(n)]
            cm = build_confusion_matrix(truths, preds)
            assert cm.total == n
            for i in range(len(cm.labels)):
                assert cm.tp(i) + cm.fp(i) + cm.fn(i) + cm.tn(i) == n


class TestAccuracy:
    def test_perfect(self):
        assert accuracy(build_confusion_matrix(["A", "B"], ["A", "B"])) == 1.0

    def test_hand_tally_three_fifths(self):
        cm = build_confusion_matrix(HAND_TALLY_TRUTHS, HAND_TALLY_PREDS)
        assert abs(accuracy(cm) - 0.6) < 1e-12

    def test_binary_equals_tp_tn_formula_exactly(self):
        rng = random.Random(11)
        for _ in range(30):
            n = rng.randint(2, 50)
            truths = [rng.choice("AB") for _ in range(n)]
            preds = [rng.choice("AB") for _ in range(n)]
            cm = build_confusion_matrix(truths, preds)
            if len(cm.labels) != 2:
                continue
            tp, tn, fp, fn = cm.tp(0), cm.tn(0), cm.fp(0), cm.fn(0)
            assert accuracy(cm) == (tp + tn) / (tp + tn + fp + fn)


class TestFMeasure:
    def test_unity(self):
        cm = build_confusion_matrix(["A", "B"], ["A", "B"])
        assert precision_recall_f(cm, 0) == (1.0, 1.0, 1.0)

    def test_hand_tally_per_class_and_macro(self):
        cm = build_confusion_matrix(HAND_TALLY_TRUTHS, HAND_TALLY_PREDS)
        pa, ra, fa = precision_recall_f(cm, 0)
        pb, rb, fb = precision_recall_f(cm, 1)
        assert (pa, ra) == (0.5, 0.5) and abs(fa - 0.5) < 1e-12
        assert abs(pb - 2 / 3) < 1e-12 and abs(rb - 2 / 3) < 1e-12 and abs(fb - 2 / 3) < 1e-12
        assert abs(macro_f_measure(cm) - 7 / 12) < 1e-12

    def test_class_never_predicted_gets_zero_f(self):
        # C never predicted and never correctly hit: zero-denominator rule
        cm = build_confusion_matrix(["A", "C"], ["A", "A"])
        _, _, f = precision_recall_f(cm, cm.index_of("C"))
        assert f == 0.0

    def test_unknown_class_index(self):
        cm = build_confusion_matrix(["A"], ["A"])
        with pytest.raises(EvaluationError):
            precision_recall_f(cm, 5)

    def test_macro_f_is_one_iff_diagonal(self):
        diag = build_confusion_matrix(["A", "B", "B"], ["A", "B", "B"])
        assert macro_f_measure(diag) == 1.0
        off = build_confusion_matrix(["A", "B", "B"], ["A", "B", "A"])
        assert macro_f_measure(off) < 1.0


def brute_force_metrics(truths, preds):
    """Independent tally: dict of per-class (precision, recall, f) plus accuracy."""
    labels = sorted(set(truths) | set(preds))
    acc = sum(t == p for t, p in zip(truths, preds)) / len(truths)
    per_class = {}
    for lab in labels:
        tp = sum(1 for t, p in zip(truths, preds) if t == lab and p == lab)
        fp = sum(1 for t, p in zip(truths, preds) if t != lab and p == lab)
        fn = sum(1 for t, p in zip(truths, preds) if t == lab and p != lab)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[lab] = (precision, recall, f)
    return acc, per_class


@pytest.mark.parametrize("case_seed", range(20))
def test_metrics_match_brute_force_tally(case_seed):
    rng = random.Random(500 + case_seed)
    n = rng.randint(1, 60)
    alphabet = "ABCD"[: rng.randint(2, 4)]
    truths = [rng.choice(alphabet) for _ in range(n)]
    preds = [rng.choice(alphabet) for _ in range(n)]
    cm = build_confusion_matrix(truths, preds)
    expected_acc, expected_per_class = brute_force_metrics(truths, preds)
    assert accuracy(cm) == pytest.approx(expected_acc, abs=1e-12)
    for i, lab in enumerate(cm.labels):
        got = precision_recall_f(cm, i)
        assert got == pytest.approx(expected_per_class[lab], abs=1e-12)
    expected_macro = sum(v[2] for v in expected_per_class.values()) / len(expected_per_class)
    assert macro_f_measure(cm) == pytest.approx(expected_macro, abs=1e-12)


def test_metrics_invariant_under_relabeling():
    rng = random.Random(9)
    truths = [rng.choice("ABC") for _ in range(60)]
    preds = [rng.choice("ABC") for _ in range(60)]
    base_acc = accuracy(build_confusion_matrix(truths, preds))
    base_macro = macro_f_measure(build_confusion_matrix(truths, preds))
    for perm in itertools.permutations("ABC"):
        mapping = dict(zip("ABC", perm))
        cm = build_confusion_matrix([mapping[t] for t in truths], [mapping[p] for p in preds])
        assert accuracy(cm) == pytest.approx(base_acc, abs=1e-12)
        assert macro_f_measure(cm) == pytest.approx(base_macro, abs=1e-12)


@pytest.fixture(scope="module")
def small_dataset():
    return generate_synthetic(GeneratorConfig(seed=13, n_records=600, noise_rate=0.15))


class TestEvaluateHoldout:
    def test_report_consistent_with_recomputation(self, small_dataset):
        from edurec.dataset import holdout_split
        from edurec.evaluation import evaluate_holdout_with_model

        report, model = evaluate_holdout_with_model(
            small_dataset, AlgorithmSpec("dt"), split_seed=4, training_seed=4, timing_repeats=1
        )
        _, test = holdout_split(small_dataset, 0.8, seed=4)
        cm = build_confusion_matrix([r.label for r in test.rows], [model.predict(r) for r in test.rows])
        assert report.test_accuracy == accuracy(cm)
        assert report.macro_f_measure == macro_f_measure(cm)

    def test_deterministic_except_timing(self, small_dataset):
        a = evaluate_holdout(small_dataset, AlgorithmSpec("nb"), 4, 4, timing_repeats=1)
        b = evaluate_holdout(small_dataset, AlgorithmSpec("nb"), 4, 4, timing_repeats=1)
        assert a.as_dict() | {"training_time_ms": 0} == b.as_dict() | {"training_time_ms": 0}

    def test_noise_free_tree_recovers_rule(self):
        ds = generate_synthetic(GeneratorConfig(seed=42, n_records=1000, noise_rate=0.0))
        report = evaluate_holdout(ds, AlgorithmSpec("dt"), 7, 7, timing_repeats=1)
        assert report.test_accuracy >= 0.99

    def test_rates_within_bounds(self, small_dataset):
        report = evaluate_holdout(small_dataset, AlgorithmSpec("nb"), 1, 1, timing_repeats=1)
        assert 0 <= report.test_accuracy <= 1
        assert 0 <= report.train_accuracy <= 1
        assert 0 <= report.macro_f_measure <= 1
        assert report.training_time_ms >= 0

    def test_unknown_algorithm_rejected(self):
        with pytest.raises(EvaluationError):
            AlgorithmSpec("svm")


@pytest.fixture(scope="module")
def report(small_dataset):
    from edurec.classifiers import ForestParams

    specs = (
        AlgorithmSpec("dt"),
        AlgorithmSpec("rf", ForestParams(n_trees=15)),
        AlgorithmSpec("nb"),
    )
    return compare_algorithms(small_dataset, specs, split_seed=2, training_seed=2, timing_repeats=1)


class TestCompareAlgorithms:
    def test_all_algorithms_evaluated_on_same_split(self, report, small_dataset):
        assert len(report.entries) == 3
        fingerprints = {e.report.dataset_fingerprint for e in report.entries}
        assert len(fingerprints) == 1
        assert all(e.report.split_seed == 2 for e in report.entries)

    def test_all_metric_cells_populated(self, report):
        for entry in report.entries:
            r = entry.report
            assert r is not None
            for value in (r.test_accuracy, r.train_accuracy, r.macro_f_measure, r.training_time_ms):
                assert value is not None

    def test_table_lists_every_algorithm(self, report):
        table = comparison_table(report)
        for name in ("decision_tree", "random_forest", "naive_bayes"):
            assert name in table

    def test_csv_format(self, report, tmp_path):
        text = comparison_csv(report)
        lines = text.strip().split("\n")
        assert lines[0] == "algorithm,test_accuracy,train_accuracy,macro_f,training_time_ms"
        assert len(lines) == 4

    def test_failing_algorithm_recorded_without_stopping_others(self, small_dataset, monkeypatch):
        import edurec.evaluation as ev

        def broken(*args, **kwargs):
            raise RuntimeError("synthetic failure")

        monkeypatch.setitem(ev.ALGORITHM_NAMES, "dt", "decision_tree")
        monkeypatch.setattr(ev, "train_decision_tree", broken)
        report = compare_algorithms(
            small_dataset,
            (AlgorithmSpec("dt"), AlgorithmSpec("nb")),
            split_seed=1,
            training_seed=1,
            timing_repeats=1,
        )
        assert report.entries[0].report is None
        assert "synthetic failure" in report.entries[0].error
        assert report.entries[1].report is not None
        assert "error" in comparison_table(report)

    def test_empty_specs_rejected(self, small_dataset):
        with pytest.raises(EvaluationError):
            compare_algorithms(small_dataset, ())

    def test_format_report_renders(self, report):
        text = format_report(report.entries[0].report)
        assert "test accuracy" in text
        assert "per-class" in text
