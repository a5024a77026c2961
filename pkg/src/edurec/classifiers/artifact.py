"""Versioned JSON serialization for trained models.

A saved artifact is self-describing: format version, algorithm tag, params,
schema, class labels and the full model body. Floats survive the round trip
exactly (shortest-repr JSON rendering), so a loaded model predicts
identically to the one saved. Serialization is canonical (sorted keys), so
identical models produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from edurec.dataset import AttributeSpec, Schema

from .forest import ForestParams, RandomForestModel
from .naive_bayes import CategoricalStats, GaussianStats, NaiveBayesModel, NbParams
from .tree import Branch, CategoricalSplit, DecisionTreeModel, Leaf, NumericSplit, TreeParams

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Artifact file is malformed or has an unsupported version/algorithm."""


def _node_to_dict(node) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "label": node.label, "counts": node.counts}
    if isinstance(node, NumericSplit):
        return {
            "kind": "numeric",
            "attribute": node.attribute,
            "threshold": node.threshold,
            "left": _node_to_dict(node.left),
            "right": _node_to_dict(node.right),
        }
    return {
        "kind": "categorical",
        "attribute": node.attribute,
        "branches": [
            {"value": b.value, "count": b.count, "child": _node_to_dict(b.child)}
            for b in node.branches
        ],
    }


def _node_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "leaf":
        return Leaf(label=d["label"], counts={k: int(v) for k, v in d["counts"].items()})
    if kind == "numeric":
        return NumericSplit(
            attribute=d["attribute"],
            threshold=float(d["threshold"]),
            left=_node_from_dict(d["left"]),
            right=_node_from_dict(d["right"]),
        )
    if kind == "categorical":
        return CategoricalSplit(
            attribute=d["attribute"],
            branches=[
                Branch(value=b["value"], count=int(b["count"]), child=_node_from_dict(b["child"]))
                for b in d["branches"]
            ],
        )
    raise ModelFormatError(f"unknown node kind {kind!r}")


def _schema_to_dict(schema: Schema) -> dict:
    return {
        "attributes": [{"name": a.name, "kind": a.kind} for a in schema.attributes],
        "label": schema.label,
    }


def _schema_from_dict(d: dict) -> Schema:
    return Schema(
        attributes=tuple(AttributeSpec(a["name"], a["kind"]) for a in d["attributes"]),
        label=d["label"],
    )


def model_to_dict(model) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "algorithm": model.algorithm,
        "schema": _schema_to_dict(model.schema),
        "labels": list(model.labels),
    }
    if isinstance(model, DecisionTreeModel):
        doc["params"] = asdict(model.params)
        doc["model"] = {"root": _node_to_dict(model.root)}
    elif isinstance(model, RandomForestModel):
        doc["params"] = asdict(model.params)
        doc["model"] = {
            "features_per_split": model.features_per_split,
            "tree_seeds": [list(s) for s in model.tree_seeds],
            "trees": [_node_to_dict(t.root) for t in model.trees],
        }
    elif isinstance(model, NaiveBayesModel):
        doc["params"] = asdict(model.params)
        doc["model"] = {
            "class_counts": list(model.class_counts),
            "priors": list(model.priors),
            "categorical": {
                name: {"values": list(s.values), "counts": [list(row) for row in s.counts]}
                for name, s in model.categorical.items()
            },
            "numeric": {
                name: {"means": list(s.means), "variances": list(s.variances)}
                for name, s in model.numeric.items()
            },
        }
    else:
        raise ModelFormatError(f"unsupported model type {type(model).__name__}")
    return doc


def model_from_dict(doc: dict):
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {version!r}")
    algorithm = doc.get("algorithm")
    schema = _schema_from_dict(doc["schema"])
    labels = tuple(doc["labels"])
    body = doc["model"]
    if algorithm == "decision_tree":
        return DecisionTreeModel(
            schema=schema,
            labels=labels,
            params=TreeParams(**doc["params"]),
            root=_node_from_dict(body["root"]),
        )
    if algorithm == "random_forest":
        raw = dict(doc["params"])
        raw["tree"] = TreeParams(**raw["tree"])
        params = ForestParams(**raw)
        trees = tuple(
            DecisionTreeModel(schema=schema, labels=labels, params=params.tree,
                              root=_node_from_dict(t))
            for t in body["trees"]
        )
        return RandomForestModel(
            schema=schema,
            labels=labels,
            params=params,
            features_per_split=int(body["features_per_split"]),
            trees=trees,
            tree_seeds=tuple((int(a), int(b)) for a, b in body["tree_seeds"]),
        )
    if algorithm == "naive_bayes":
        return NaiveBayesModel(
            schema=schema,
            labels=labels,
            params=NbParams(**doc["params"]),
            class_counts=tuple(int(c) for c in body["class_counts"]),
            priors=tuple(float(p) for p in body["priors"]),
            categorical={
                name: CategoricalStats(
                    values=tuple(s["values"]),
                    counts=tuple(tuple(int(c) for c in row) for row in s["counts"]),
                )
                for name, s in body["categorical"].items()
            },
            numeric={
                name: GaussianStats(
                    means=tuple(float(m) for m in s["means"]),
                    variances=tuple(float(v) for v in s["variances"]),
                )
                for name, s in body["numeric"].items()
            },
        )
    raise ModelFormatError(f"unknown algorithm {algorithm!r}")


def serialize_model(model) -> str:
    """Canonical artifact text; identical models serialize to identical bytes."""
    return json.dumps(model_to_dict(model), sort_keys=True, indent=2) + "\n"


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(serialize_model(model), encoding="utf-8")


def load_model(path: str | Path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"artifact is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("artifact root must be an object")
    try:
        return model_from_dict(doc)
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"artifact is missing or has malformed fields: {exc}") from None
