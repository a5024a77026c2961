"""Naive Bayes with Laplace-smoothed categorical and Gaussian numeric likelihoods.

Scoring runs in log space: log prior plus the summed log likelihoods per
class; the posterior is the softmax of those scores. Categorical attributes
use additive-alpha smoothing over the attribute's training vocabulary, so
unseen values keep a strictly positive likelihood. Numeric attributes use a
per-class Gaussian whose variance is floored to keep densities finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from edurec.dataset import Dataset, Schema

from .tree import SchemaMismatchError, feature_value


@dataclass(frozen=True)
class NbParams:
    laplace_alpha: float = 1.0
    variance_floor: float = 1e-9

    def __post_init__(self):
        if self.laplace_alpha <= 0:
            raise ValueError("laplace_alpha must be > 0")
        if self.variance_floor <= 0:
            raise ValueError("variance_floor must be > 0")


@dataclass(frozen=True)
class CategoricalStats:
    values: tuple  # sorted distinct training values (the smoothing vocabulary)
    counts: tuple[tuple[int, ...], ...]  # per value: per-class occurrence counts


@dataclass(frozen=True)
class GaussianStats:
    means: tuple[float, ...]  # per class
    variances: tuple[float, ...]  # per class, already floored


@dataclass
class NaiveBayesModel:
    schema: Schema
    labels: tuple[str, ...]  # sorted
    params: NbParams
    class_counts: tuple[int, ...]
    priors: tuple[float, ...]
    categorical: dict[str, CategoricalStats]
    numeric: dict[str, GaussianStats]

    algorithm = "naive_bayes"

    def predict(self, row) -> str:
        return predict_naive_bayes(self, row)

    def predict_detail(self, row) -> tuple[str, float]:
        """Predicted label plus its posterior probability."""
        posterior = nb_posterior(self, row)
        label = predict_naive_bayes(self, row)
        return label, posterior[label]


def categorical_likelihood(count: int, class_total: int, vocab_size: int, alpha: float) -> float:
    """Laplace-smoothed P(value | class) = (count + a) / (n_c + a * |V|)."""
    return (count + alpha) / (class_total + alpha * vocab_size)


def gaussian_log_pdf(x: float, mean: float, variance: float) -> float:
    return -0.5 * math.log(2.0 * math.pi * variance) - (x - mean) ** 2 / (2.0 * variance)


def train_naive_bayes(train: Dataset, params: NbParams = NbParams()) -> NaiveBayesModel:
    if len(train) == 0:
        raise ValueError("training set must be non-empty")
    label_name = train.schema.label
    labels = tuple(sorted({feature_value(r, label_name) for r in train.rows}))
    label_code = {lab: i for i, lab in enumerate(labels)}
    k = len(labels)
    y = np.fromiter(
        (label_code[feature_value(r, label_name)] for r in train.rows), dtype=np.int64, count=len(train)
    )
    class_counts = np.bincount(y, minlength=k)
    priors = class_counts / len(train)

    categorical: dict[str, CategoricalStats] = {}
    numeric: dict[str, GaussianStats] = {}
    for attr in train.schema.attributes:
        column = np.asarray([feature_value(r, attr.name) for r in train.rows])
        if attr.kind == "numeric":
            values = column.astype(float)
            means, variances = [], []
            for c in range(k):
                sample = values[y == c]
                means.append(float(sample.mean()))
                variances.append(max(float(sample.var()), params.variance_floor))
            numeric[attr.name] = GaussianStats(means=tuple(means), variances=tuple(variances))
        else:
            uniq, inverse = np.unique(column, return_inverse=True)
            counts = np.bincount(inverse * k + y, minlength=len(uniq) * k).reshape(len(uniq), k)
            categorical[attr.name] = CategoricalStats(
                values=tuple(uniq.tolist()),
                counts=tuple(tuple(int(c) for c in row) for row in counts),
            )

    return NaiveBayesModel(
        schema=train.schema,
        labels=labels,
        params=params,
        class_counts=tuple(int(c) for c in class_counts),
        priors=tuple(float(p) for p in priors),
        categorical=categorical,
        numeric=numeric,
    )


def nb_log_scores(model: NaiveBayesModel, row) -> np.ndarray:
    """Per-class log prior + summed log likelihoods, in label order."""
    scores = np.log(np.asarray(model.priors))
    alpha = model.params.laplace_alpha
    for attr in model.schema.attributes:
        value = feature_value(row, attr.name)
        if attr.kind == "numeric":
            stats = model.numeric[attr.name]
            try:
                x = float(value)
            except (TypeError, ValueError):
                raise SchemaMismatchError(
                    f"attribute {attr.name!r} expected a numeric value, got {value!r}"
                ) from None
            for c in range(len(model.labels)):
                scores[c] += gaussian_log_pdf(x, stats.means[c], stats.variances[c])
        else:
            stats = model.categorical[attr.name]
            vocab_size = len(stats.values)
            try:
                pos = stats.values.index(value)
            except ValueError:
                pos = None  # unseen value: smoothing keeps likelihood positive
            for c in range(len(model.labels)):
                count = stats.counts[pos][c] if pos is not None else 0
                scores[c] += math.log(
                    categorical_likelihood(count, model.class_counts[c], vocab_size, alpha)
                )
    return scores


def softmax(log_scores: np.ndarray) -> np.ndarray:
    shifted = np.exp(log_scores - log_scores.max())
    return shifted / shifted.sum()


def nb_posterior(model: NaiveBayesModel, row) -> dict[str, float]:
    """Posterior probability per class label; values sum to 1."""
    p = softmax(nb_log_scores(model, row))
    return {label: float(p[i]) for i, label in enumerate(model.labels)}


def predict_naive_bayes(model: NaiveBayesModel, row) -> str:
    """Argmax of the log scores; ties go to the lexicographically smallest label."""
    scores = nb_log_scores(model, row)
    return model.labels[int(np.argmax(scores))]
