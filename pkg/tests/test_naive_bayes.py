import math
import random

import numpy as np
import pytest

from edurec.classifiers import (
    NbParams,
    SchemaMismatchError,
    nb_log_scores,
    nb_posterior,
    predict_naive_bayes,
    serialize_model,
    softmax,
    train_naive_bayes,
)
from edurec.classifiers.naive_bayes import categorical_likelihood
from edurec.dataset import (
    DEFAULT_SCHEMA,
    AttributeSpec,
    Dataset,
    GeneratorConfig,
    Schema,
    generate_synthetic,
)


def tiny_dataset(rows, attributes):
    return Dataset(Schema(tuple(attributes)), tuple(rows))


class TestTraining:
    def test_priors_are_class_frequencies(self):
        attrs = [AttributeSpec("subject", "categorical")]
        rows = [{"subject": "x", "label": "A"}] * 3 + [{"subject": "x", "label": "B"}]
        model = train_naive_bayes(tiny_dataset(rows, attrs))
        assert model.labels == ("A", "B")
        assert model.priors == (0.75, 0.25)

    def test_priors_sum_to_one(self):
        ds = generate_synthetic(GeneratorConfig(seed=1, n_records=700, noise_rate=0.15))
        model = train_naive_bayes(ds)
        assert abs(sum(model.priors) - 1.0) < 1e-12

    def test_laplace_formula_for_absent_value(self):
        # value absent for a class with 3 rows, alpha=1, vocabulary size 2
        assert categorical_likelihood(0, 3, 2, 1.0) == pytest.approx(1 / 5, abs=0)

    def test_smoothed_likelihoods_strictly_positive(self):
        attrs = [AttributeSpec("subject", "categorical")]
        rows = [
            {"subject": "x", "label": "A"},
            {"subject": "x", "label": "A"},
            {"subject": "y", "label": "B"},
        ]
        model = train_naive_bayes(tiny_dataset(rows, attrs))
        stats = model.categorical["subject"]
        for pos in range(len(stats.values)):
            for c, n_c in enumerate(model.class_counts):
                p = categorical_likelihood(
                    stats.counts[pos][c], n_c, len(stats.values), model.params.laplace_alpha
                )
                assert p > 0

    def test_constant_numeric_attribute_hits_variance_floor(self):
        attrs = [AttributeSpec("avg_score", "numeric")]
        rows = [{"avg_score": 5.0, "label": "A"}] * 4 + [{"avg_score": 7.0, "label": "B"}] * 2
        model = train_naive_bayes(tiny_dataset(rows, attrs))
        assert model.numeric["avg_score"].variances == (1e-9, 1e-9)
        scores = nb_log_scores(model, {"avg_score": 5.0})
        assert np.isfinite(scores).all()

    def test_empty_training_set_rejected(self):
        with pytest.raises(ValueError):
            train_naive_bayes(Dataset(DEFAULT_SCHEMA, ()))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            NbParams(laplace_alpha=0.0)
        with pytest.raises(ValueError):
            NbParams(variance_floor=0.0)

    def test_deterministic_bitwise(self):
        ds = generate_synthetic(GeneratorConfig(seed=2, n_records=400, noise_rate=0.15))
        assert serialize_model(train_naive_bayes(ds)) == serialize_model(train_naive_bayes(ds))


class TestPrediction:
    def test_symmetric_classes_give_uniform_posterior_and_first_label(self):
        attrs = [AttributeSpec("subject", "categorical")]
        rows = [
            {"subject": "x", "label": "b"},
            {"subject": "x", "label": "a"},
        ]
        model = train_naive_bayes(tiny_dataset(rows, attrs))
        posterior = nb_posterior(model, {"subject": "x"})
        assert posterior["a"] == pytest.approx(0.5, abs=1e-12)
        assert posterior["b"] == pytest.approx(0.5, abs=1e-12)
        assert predict_naive_bayes(model, {"subject": "x"}) == "a"

    def test_posterior_sums_to_one(self):
        ds = generate_synthetic(GeneratorConfig(seed=3, n_records=500, noise_rate=0.15))
        model = train_naive_bayes(ds)
        for r in ds.rows[:40]:
            posterior = nb_posterior(model, r)
            assert abs(sum(posterior.values()) - 1.0) < 1e-9
            assert all(p >= 0 for p in posterior.values())

    def test_argmax_is_shift_invariant(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            scores = rng.normal(size=4)
            shifted = scores + rng.normal()
            assert np.argmax(scores) == np.argmax(shifted)
            assert np.allclose(softmax(scores), softmax(shifted), atol=1e-12)

    def test_unseen_categorical_value_still_scores(self):
        attrs = [AttributeSpec("subject", "categorical")]
        rows = [{"subject": "x", "label": "A"}, {"subject": "y", "label": "B"}]
        model = train_naive_bayes(tiny_dataset(rows, attrs))
        posterior = nb_posterior(model, {"subject": "z"})
        assert abs(sum(posterior.values()) - 1.0) < 1e-9

    def test_non_numeric_value_is_schema_mismatch(self):
        ds = generate_synthetic(GeneratorConfig(seed=4, n_records=50))
        model = train_naive_bayes(ds)
        with pytest.raises(SchemaMismatchError):
            model.predict({"subject": "Java", "bla": 1, "mla": 1, "hla": 1, "avg_score": "high"})


def brute_force_posterior(model, row):
    """Bayes' rule by explicit probability products, no logarithms."""
    raw = []
    for c, label in enumerate(model.labels):
        p = model.priors[c]
        for attr in model.schema.attributes:
            value = row[attr.name]
            if attr.kind == "numeric":
                stats = model.numeric[attr.name]
                var = stats.variances[c]
                density = math.exp(-((value - stats.means[c]) ** 2) / (2 * var)) / math.sqrt(
                    2 * math.pi * var
                )
                p *= density
            else:
                stats = model.categorical[attr.name]
                vocab = len(stats.values)
                count = 0
                if value in stats.values:
                    count = stats.counts[stats.values.index(value)][c]
                p *= (count + model.params.laplace_alpha) / (
                    model.class_counts[c] + model.params.laplace_alpha * vocab
                )
        raw.append(p)
    total = sum(raw)
    return {label: raw[c] / total for c, label in enumerate(model.labels)}


def random_tiny_dataset(rng):
    n_attrs = rng.randint(1, 3)
    attrs = []
    for i in range(n_attrs):
        kind = rng.choice(["categorical", "numeric"])
        attrs.append(AttributeSpec(f"f{i}", kind))
    n_rows = rng.randint(4, 30)
    classes = ["a", "b", "c"][: rng.randint(2, 3)]
    rows = []
    for _ in range(n_rows):
        row = {"label": rng.choice(classes)}
        for a in attrs:
            row[a.name] = rng.uniform(0, 10) if a.kind == "numeric" else rng.choice("uvwxyz")
        rows.append(row)
    # every class must appear at least once
    for i, c in enumerate(classes):
        rows[i]["label"] = c
    return tiny_dataset(rows, attrs)


@pytest.mark.parametrize("case_seed", range(20))
def test_log_space_matches_brute_force_products(case_seed):
    rng = random.Random(1000 + case_seed)
    ds = random_tiny_dataset(rng)
    model = train_naive_bayes(ds)
    for row in ds.rows:
        expected = brute_force_posterior(model, row)
        actual = nb_posterior(model, row)
        for label in model.labels:
            assert actual[label] == pytest.approx(expected[label], abs=1e-9)
        assert predict_naive_bayes(model, row) == max(
            sorted(expected), key=lambda lab: expected[lab]
        )
