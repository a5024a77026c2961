"""Random forest: bagged decision trees with per-node feature subsets.

Each tree i is fully determined by (seed, i): its generator comes from
``SeedSequence(seed).spawn()`` child i (PCG64), which first draws the
bootstrap sample and then the per-node attribute subsets in recursion
order. Prediction is a plurality vote over the trees, ties broken by the
lexicographically smallest label.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from edurec.dataset import Dataset

from .tree import DecisionTreeModel, TreeParams, encode_dataset, grow_tree


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    features_per_split: int | None = None  # None resolves to ceil(sqrt(d))
    bootstrap: bool = True
    seed: int = 0
    tree: TreeParams = TreeParams()

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be >= 1")


@dataclass
class RandomForestModel:
    schema: object
    labels: tuple[str, ...]
    params: ForestParams
    features_per_split: int  # resolved value actually used
    trees: tuple[DecisionTreeModel, ...]
    tree_seeds: tuple[tuple[int, int], ...]  # (forest seed, tree index) per tree

    algorithm = "random_forest"

    def predict(self, row) -> str:
        return predict_random_forest(self, row)

    def predict_detail(self, row) -> tuple[str, float]:
        """Predicted label plus the fraction of trees that voted for it."""
        return _vote(self, row)


def train_random_forest(train: Dataset, params: ForestParams = ForestParams()) -> RandomForestModel:
    if len(train) == 0:
        raise ValueError("training set must be non-empty")
    enc = encode_dataset(train)
    n = len(train)
    d = len(enc.names)
    features_per_split = min(params.features_per_split or math.ceil(math.sqrt(d)), d)

    trees = []
    streams = np.random.SeedSequence(params.seed).spawn(params.n_trees)
    for i in range(params.n_trees):
        rng = np.random.default_rng(streams[i])
        if params.bootstrap:
            idx = rng.integers(0, n, size=n)
        else:
            idx = np.arange(n)
        root = grow_tree(enc, idx, depth=0, params=params.tree,
                         feature_rng=rng, features_per_split=features_per_split)
        trees.append(DecisionTreeModel(schema=train.schema, labels=enc.labels,
                                       params=params.tree, root=root))
    return RandomForestModel(
        schema=train.schema,
        labels=enc.labels,
        params=params,
        features_per_split=features_per_split,
        trees=tuple(trees),
        tree_seeds=tuple((params.seed, i) for i in range(params.n_trees)),
    )


def _vote(model: RandomForestModel, row) -> tuple[str, float]:
    votes = Counter(tree.predict(row) for tree in model.trees)
    top = max(votes.values())
    label = min(lab for lab, c in votes.items() if c == top)
    return label, top / len(model.trees)


def predict_random_forest(model: RandomForestModel, row) -> str:
    """The class with the most tree votes; ties go to the smallest label."""
    return _vote(model, row)[0]
