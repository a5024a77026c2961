"""Confusion matrices, accuracy and F-measure, and algorithm comparison reports.

Accuracy is trace/total over the multiclass confusion matrix (the standard
generalization of the binary (TP+TN)/(TP+TN+FP+FN), to which it reduces at
K=2). F-measure is 2PR/(P+R) per class, reported macro-averaged; any
zero-denominator rate is defined as 0 so rare classes never break a report.
Training time is the median of three repeated trainings on a monotonic
clock, in milliseconds.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from edurec.classifiers import (
    ForestParams,
    NbParams,
    TreeParams,
    train_decision_tree,
    train_naive_bayes,
    train_random_forest,
)
from edurec.dataset import Dataset, dataset_fingerprint, holdout_split

COMPARISON_CSV_HEADER = ("algorithm", "test_accuracy", "train_accuracy", "macro_f", "training_time_ms")


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # counts[i][j]: true class i predicted as j

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise EvaluationError(f"unknown class label {label!r}") from None

    def _check_index(self, class_i: int) -> None:
        if not 0 <= class_i < len(self.labels):
            raise EvaluationError(f"class index {class_i} out of range")

    def tp(self, class_i: int) -> int:
        self._check_index(class_i)
        return self.counts[class_i][class_i]

    def fp(self, class_i: int) -> int:
        self._check_index(class_i)
        return sum(self.counts[r][class_i] for r in range(len(self.labels))) - self.tp(class_i)

    def fn(self, class_i: int) -> int:
        self._check_index(class_i)
        return sum(self.counts[class_i]) - self.tp(class_i)

    def tn(self, class_i: int) -> int:
        return self.total - self.tp(class_i) - self.fp(class_i) - self.fn(class_i)


def build_confusion_matrix(truths, predictions) -> ConfusionMatrix:
    truths = list(truths)
    predictions = list(predictions)
    if not truths:
        raise EvaluationError("no instances to tally")
    if len(truths) != len(predictions):
        raise EvaluationError(
            f"length mismatch: {len(truths)} truths vs {len(predictions)} predictions"
        )
    labels = tuple(sorted(set(truths) | set(predictions)))
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(truths, predictions):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(labels=labels, counts=tuple(tuple(int(c) for c in row) for row in counts))


def accuracy(cm: ConfusionMatrix) -> float:
    total = cm.total
    if total == 0:
        raise EvaluationError("empty confusion matrix")
    trace = sum(cm.counts[i][i] for i in range(len(cm.labels)))
    return trace / total


def precision_recall_f(cm: ConfusionMatrix, class_i: int) -> tuple[float, float, float]:
    """One-vs-rest precision, recall and F for one class (0 on empty denominators)."""
    tp, fp, fn = cm.tp(class_i), cm.fp(class_i), cm.fn(class_i)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f


def macro_f_measure(cm: ConfusionMatrix) -> float:
    """Unweighted mean of per-class F-measures."""
    per_class = [precision_recall_f(cm, i)[2] for i in range(len(cm.labels))]
    return sum(per_class) / len(per_class)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f_measure: float


@dataclass(frozen=True)
class EvaluationReport:
    algorithm: str
    test_accuracy: float
    train_accuracy: float
    macro_f_measure: float
    per_class: dict[str, ClassMetrics]
    training_time_ms: float
    split_seed: int
    training_seed: int
    dataset_fingerprint: str

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "test_accuracy": self.test_accuracy,
            "train_accuracy": self.train_accuracy,
            "macro_f_measure": self.macro_f_measure,
            "per_class": {
                label: {"precision": m.precision, "recall": m.recall, "f_measure": m.f_measure}
                for label, m in self.per_class.items()
            },
            "training_time_ms": self.training_time_ms,
            "split_seed": self.split_seed,
            "training_seed": self.training_seed,
            "dataset_fingerprint": self.dataset_fingerprint,
        }


@dataclass(frozen=True)
class AlgorithmSpec:
    """Which trainer to run and with what hyperparameters (None = defaults)."""

    algorithm: str  # "dt", "rf" or "nb"
    params: TreeParams | ForestParams | NbParams | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHM_NAMES:
            raise EvaluationError(f"unknown algorithm {self.algorithm!r}; expected dt, rf or nb")


ALGORITHM_NAMES = {"dt": "decision_tree", "rf": "random_forest", "nb": "naive_bayes"}
ALGORITHM_TAGS = {name: tag for tag, name in ALGORITHM_NAMES.items()}


def params_from_dict(algorithm: str, raw: dict | None):
    """Build hyperparameters for an algorithm tag from a flat mapping.

    Forest configs accept the tree keys (max_depth, min_samples_split)
    alongside their own; unknown keys are an error. None means defaults.
    """
    if not raw:
        return None
    raw = dict(raw)
    try:
        if algorithm == "dt":
            return TreeParams(**raw)
        if algorithm == "rf":
            tree_keys = {k: raw.pop(k) for k in ("max_depth", "min_samples_split") if k in raw}
            tree = TreeParams(**tree_keys) if tree_keys else TreeParams()
            return ForestParams(tree=tree, **raw)
        if algorithm == "nb":
            return NbParams(**raw)
    except TypeError as exc:
        raise EvaluationError(f"bad params for {algorithm}: {exc}") from None
    raise EvaluationError(f"unknown algorithm {algorithm!r}; expected dt, rf or nb")


def train_for_spec(spec: AlgorithmSpec, train: Dataset, training_seed: int):
    """Train one model; the seed drives every stochastic trainer."""
    if spec.algorithm == "dt":
        params = spec.params or TreeParams()
        return train_decision_tree(train, params, seed=training_seed)
    if spec.algorithm == "rf":
        params = spec.params or ForestParams()
        return train_random_forest(train, replace(params, seed=training_seed))
    params = spec.params or NbParams()
    return train_naive_bayes(train, params)


def evaluate_holdout(
    dataset: Dataset,
    spec: AlgorithmSpec,
    split_seed: int,
    training_seed: int,
    train_fraction: float = 0.8,
    timing_repeats: int = 3,
) -> EvaluationReport:
    """Hold-out evaluation of one algorithm on a seeded 80/20 split."""
    report, _ = evaluate_holdout_with_model(
        dataset, spec, split_seed, training_seed, train_fraction, timing_repeats
    )
    return report


def evaluate_holdout_with_model(
    dataset: Dataset,
    spec: AlgorithmSpec,
    split_seed: int,
    training_seed: int,
    train_fraction: float = 0.8,
    timing_repeats: int = 3,
) -> tuple[EvaluationReport, object]:
    """Like evaluate_holdout, but also returns the trained model.

    The training call is repeated timing_repeats times and the median wall
    time reported; training is deterministic, so every repeat yields the
    same model.
    """
    train, test = holdout_split(dataset, train_fraction, split_seed)
    durations = []
    model = None
    for _ in range(max(1, timing_repeats)):
        started = time.perf_counter()
        model = train_for_spec(spec, train, training_seed)
        durations.append((time.perf_counter() - started) * 1000.0)

    train_cm = build_confusion_matrix(
        [r.label for r in train.rows], [model.predict(r) for r in train.rows]
    )
    test_cm = build_confusion_matrix(
        [r.label for r in test.rows], [model.predict(r) for r in test.rows]
    )
    per_class = {
        label: ClassMetrics(*precision_recall_f(test_cm, i))
        for i, label in enumerate(test_cm.labels)
    }
    report = EvaluationReport(
        algorithm=spec.algorithm,
        test_accuracy=accuracy(test_cm),
        train_accuracy=accuracy(train_cm),
        macro_f_measure=macro_f_measure(test_cm),
        per_class=per_class,
        training_time_ms=statistics.median(durations),
        split_seed=split_seed,
        training_seed=training_seed,
        dataset_fingerprint=dataset_fingerprint(dataset),
    )
    return report, model


@dataclass(frozen=True)
class ComparisonEntry:
    spec: AlgorithmSpec
    report: EvaluationReport | None
    error: str | None = None


@dataclass(frozen=True)
class ComparisonReport:
    entries: tuple[ComparisonEntry, ...]
    split_seed: int
    training_seed: int
    dataset_fingerprint: str

    def report_for(self, algorithm: str) -> EvaluationReport | None:
        for entry in self.entries:
            if entry.spec.algorithm == algorithm:
                return entry.report
        return None

    def as_dict(self) -> dict:
        return {
            "split_seed": self.split_seed,
            "training_seed": self.training_seed,
            "dataset_fingerprint": self.dataset_fingerprint,
            "results": [
                {
                    "algorithm": e.spec.algorithm,
                    "report": e.report.as_dict() if e.report else None,
                    "error": e.error,
                }
                for e in self.entries
            ],
        }


DEFAULT_SPECS = (AlgorithmSpec("dt"), AlgorithmSpec("rf"), AlgorithmSpec("nb"))


def compare_algorithms(
    dataset: Dataset,
    specs=DEFAULT_SPECS,
    split_seed: int = 0,
    training_seed: int = 0,
    timing_repeats: int = 3,
) -> ComparisonReport:
    """Evaluate every spec on the same hold-out split.

    A failing algorithm is recorded with its error message and does not stop
    the remaining evaluations.
    """
    if not specs:
        raise EvaluationError("at least one algorithm spec required")
    entries = []
    for spec in specs:
        try:
            report = evaluate_holdout(
                dataset, spec, split_seed, training_seed, timing_repeats=timing_repeats
            )
            entries.append(ComparisonEntry(spec=spec, report=report))
        except Exception as exc:  # noqa: BLE001 - per-algorithm isolation is the contract
            entries.append(ComparisonEntry(spec=spec, report=None, error=str(exc)))
    return ComparisonReport(
        entries=tuple(entries),
        split_seed=split_seed,
        training_seed=training_seed,
        dataset_fingerprint=dataset_fingerprint(dataset),
    )


def comparison_table(report: ComparisonReport) -> str:
    """Aligned plain-text table with the four headline metrics per algorithm."""
    header = ("algorithm", "test_acc", "train_acc", "macro_f", "train_ms")
    rows = [header]
    for entry in report.entries:
        name = ALGORITHM_NAMES[entry.spec.algorithm]
        if entry.report is None:
            rows.append((name, "error: " + (entry.error or "unknown"), "-", "-", "-"))
            continue
        r = entry.report
        rows.append(
            (
                name,
                f"{r.test_accuracy:.4f}",
                f"{r.train_accuracy:.4f}",
                f"{r.macro_f_measure:.4f}",
                f"{r.training_time_ms:.1f}",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def comparison_csv(report: ComparisonReport) -> str:
    """The machine-readable plot data behind the four comparison figures."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPARISON_CSV_HEADER)
    for entry in report.entries:
        if entry.report is None:
            continue
        r = entry.report
        writer.writerow(
            [
                ALGORITHM_NAMES[entry.spec.algorithm],
                f"{r.test_accuracy:.6f}",
                f"{r.train_accuracy:.6f}",
                f"{r.macro_f_measure:.6f}",
                f"{r.training_time_ms:.3f}",
            ]
        )
    return buf.getvalue()


def write_comparison_csv(report: ComparisonReport, path: str | Path) -> None:
    Path(path).write_text(comparison_csv(report), encoding="utf-8")


def format_report(report: EvaluationReport) -> str:
    """Human-readable evaluation report for terminal output."""
    lines = [
        f"algorithm:        {ALGORITHM_NAMES[report.algorithm]}",
        f"dataset:          {report.dataset_fingerprint}",
        f"split seed:       {report.split_seed}   training seed: {report.training_seed}",
        f"test accuracy:    {report.test_accuracy:.4f}",
        f"train accuracy:   {report.train_accuracy:.4f}",
        f"macro F-measure:  {report.macro_f_measure:.4f}",
        f"training time:    {report.training_time_ms:.1f} ms (median of 3)",
        "per-class (precision / recall / F):",
    ]
    for label, m in report.per_class.items():
        lines.append(f"  {label:<24} {m.precision:.4f} / {m.recall:.4f} / {m.f_measure:.4f}")
    return "\n".join(lines)
