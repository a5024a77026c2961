"""Decision tree induction with information gain.

Internal nodes test one attribute (multiway on categorical values, binary
threshold on numeric midpoints); leaves carry the majority class label of
the training rows routed to them. Induction is greedy and deterministic:
candidate attributes are scanned in schema order, numeric thresholds in
ascending order, and ties keep the first candidate seen.

The split search histograms class counts per attribute value instead of
re-sorting rows at every node; the quiz-feature domains are small, so one
``bincount`` per (node, attribute) covers all candidate splits at once.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from edurec.dataset import Dataset, Schema


class SchemaMismatchError(ValueError):
    """A prediction row does not conform to the model's training schema."""


def feature_value(row, name: str):
    """Fetch a named feature from a record, feature vector or mapping."""
    if isinstance(row, Mapping):
        if name not in row:
            raise SchemaMismatchError(f"row is missing attribute {name!r}")
        return row[name]
    try:
        return getattr(row, name)
    except AttributeError:
        raise SchemaMismatchError(f"row is missing attribute {name!r}") from None


def entropy(class_counts) -> float:
    """Shannon entropy -sum(p * log2 p) of a class-count multiset."""
    counts = np.asarray(list(class_counts), dtype=float)
    if counts.size == 0:
        raise ValueError("class_counts must be non-empty")
    if (counts < 0).any():
        raise ValueError("class counts must be non-negative")
    total = counts.sum()
    if total == 0:
        raise ValueError("class counts must not all be zero")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def information_gain(parent_counts, child_partitions) -> float:
    """Entropy reduction of splitting parent_counts into the given children.

    The children's class-count vectors must sum elementwise to the parent's.
    """
    parent = np.asarray(list(parent_counts), dtype=float)
    children = [np.asarray(list(c), dtype=float) for c in child_partitions]
    if not children:
        raise ValueError("at least one child partition required")
    for c in children:
        if c.shape != parent.shape:
            raise ValueError("child partition has wrong class arity")
    if not np.array_equal(sum(children), parent):
        raise ValueError("child partitions do not sum to the parent counts")
    total = parent.sum()
    weighted = sum(c.sum() * entropy(c) for c in children if c.sum() > 0)
    return entropy(parent) - weighted / total


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 12
    min_samples_split: int = 2
    # Split criterion is fixed: information gain.

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_samples_split < 1:
            raise ValueError("min_samples_split must be >= 1")


@dataclass
class Leaf:
    label: str
    counts: dict  # training label -> count at this leaf (non-zero entries)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def purity(self) -> float:
        return self.counts[self.label] / self.total


@dataclass
class Branch:
    value: object  # categorical value (str or int)
    count: int  # training rows that took this branch
    child: object


@dataclass
class CategoricalSplit:
    attribute: str
    branches: list[Branch]  # ordered by ascending value


@dataclass
class NumericSplit:
    attribute: str
    threshold: float
    left: object  # value <= threshold
    right: object  # value > threshold


@dataclass
class DecisionTreeModel:
    schema: Schema
    labels: tuple[str, ...]  # sorted class labels seen in training
    params: TreeParams
    root: object

    algorithm = "decision_tree"

    def predict(self, row) -> str:
        return predict_decision_tree(self, row)

    def predict_detail(self, row) -> tuple[str, float]:
        """Predicted label plus leaf purity (majority count / leaf total)."""
        leaf = _route(self.root, row)
        return leaf.label, leaf.purity


# ---------------------------------------------------------------------------
# Encoded training view shared with the random forest.


@dataclass
class EncodedDataset:
    names: tuple[str, ...]
    kinds: tuple[str, ...]
    uniques: list[list]  # per attribute: sorted distinct raw values
    codes: list[np.ndarray]  # per attribute: row -> index into uniques
    y: np.ndarray  # row -> class code
    labels: tuple[str, ...]  # sorted; class code c is labels[c]

    @property
    def n_classes(self) -> int:
        return len(self.labels)


def encode_dataset(dataset: Dataset) -> EncodedDataset:
    rows = dataset.rows
    label_name = dataset.schema.label
    labels = tuple(sorted({feature_value(r, label_name) for r in rows}))
    label_code = {lab: i for i, lab in enumerate(labels)}
    y = np.fromiter(
        (label_code[feature_value(r, label_name)] for r in rows), dtype=np.int64, count=len(rows)
    )
    uniques, codes = [], []
    for attr in dataset.schema.attributes:
        column = np.asarray([feature_value(r, attr.name) for r in rows])
        uniq, inverse = np.unique(column, return_inverse=True)
        uniques.append(uniq.tolist())
        codes.append(inverse.astype(np.int64))
    return EncodedDataset(
        names=dataset.schema.names,
        kinds=tuple(a.kind for a in dataset.schema.attributes),
        uniques=uniques,
        codes=codes,
        y=y,
        labels=labels,
    )


def _row_entropy(counts: np.ndarray) -> np.ndarray:
    """Entropy of each row of a (splits x classes) count matrix."""
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / totals
        terms = np.where(counts > 0, p * np.log2(np.where(counts > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=1)


@dataclass
class _SplitChoice:
    gain: float
    attribute: int
    codes_at_node: np.ndarray
    # numeric: split after this code position (<= goes left)
    code_pos: int | None = None
    threshold: float | None = None
    # categorical: observed code positions, one branch each
    branch_positions: np.ndarray | None = None
    branch_counts: np.ndarray | None = None


def _best_split(enc: EncodedDataset, idx: np.ndarray, j: int, y_node: np.ndarray,
                parent_counts: np.ndarray, parent_entropy: float) -> _SplitChoice | None:
    k = enc.n_classes
    n = idx.size
    c = enc.codes[j][idx]
    n_values = len(enc.uniques[j])
    hist = np.bincount(c * k + y_node, minlength=n_values * k).reshape(n_values, k)
    value_counts = hist.sum(axis=1)
    observed = np.flatnonzero(value_counts)
    if observed.size < 2:
        return None

    if enc.kinds[j] == "numeric":
        left = np.cumsum(hist[observed[:-1]], axis=0)
        right = parent_counts - left
        n_left = left.sum(axis=1)
        n_right = n - n_left
        weighted = (n_left * _row_entropy(left) + n_right * _row_entropy(right)) / n
        gains = parent_entropy - weighted
        best = int(np.argmax(gains))  # ties keep the lowest threshold
        pos = int(observed[best])
        threshold = (enc.uniques[j][pos] + enc.uniques[j][int(observed[best + 1])]) / 2
        return _SplitChoice(
            gain=float(gains[best]), attribute=j, codes_at_node=c,
            code_pos=pos, threshold=float(threshold),
        )

    child = hist[observed]
    weighted = float((value_counts[observed] * _row_entropy(child)).sum()) / n
    return _SplitChoice(
        gain=parent_entropy - weighted, attribute=j, codes_at_node=c,
        branch_positions=observed, branch_counts=value_counts[observed],
    )


def _majority_leaf(counts: np.ndarray, labels: tuple[str, ...]) -> Leaf:
    # argmax returns the first maximum; labels are sorted, so ties go to the
    # lexicographically smallest label.
    majority = labels[int(np.argmax(counts))]
    return Leaf(label=majority, counts={labels[i]: int(c) for i, c in enumerate(counts) if c})


def grow_tree(enc: EncodedDataset, idx: np.ndarray, depth: int, params: TreeParams,
              feature_rng: np.random.Generator | None = None,
              features_per_split: int | None = None):
    """Recursive greedy induction over an encoded row subset.

    With feature_rng set, each node scans only a random features_per_split
    subset of attributes (evaluated in ascending index order either way).
    """
    y_node = enc.y[idx]
    counts = np.bincount(y_node, minlength=enc.n_classes)
    if (
        depth >= params.max_depth
        or idx.size < params.min_samples_split
        or np.count_nonzero(counts) == 1
    ):
        return _majority_leaf(counts, enc.labels)

    d = len(enc.names)
    if feature_rng is None:
        candidates = range(d)
    else:
        size = min(features_per_split or d, d)
        candidates = np.sort(feature_rng.choice(d, size=size, replace=False))

    parent_entropy = entropy(counts)
    best: _SplitChoice | None = None
    for j in candidates:
        choice = _best_split(enc, idx, int(j), y_node, counts, parent_entropy)
        if choice is not None and (best is None or choice.gain > best.gain):
            best = choice
    if best is None or best.gain <= 0.0:  # zero-gain stop
        return _majority_leaf(counts, enc.labels)

    name = enc.names[best.attribute]
    if best.code_pos is not None:
        left_mask = best.codes_at_node <= best.code_pos
        left = grow_tree(enc, idx[left_mask], depth + 1, params, feature_rng, features_per_split)
        right = grow_tree(enc, idx[~left_mask], depth + 1, params, feature_rng, features_per_split)
        return NumericSplit(attribute=name, threshold=best.threshold, left=left, right=right)

    branches = []
    for pos, count in zip(best.branch_positions, best.branch_counts):
        child_idx = idx[best.codes_at_node == pos]
        child = grow_tree(enc, child_idx, depth + 1, params, feature_rng, features_per_split)
        branches.append(Branch(value=enc.uniques[best.attribute][int(pos)], count=int(count), child=child))
    return CategoricalSplit(attribute=name, branches=branches)


def train_decision_tree(train: Dataset, params: TreeParams = TreeParams(), seed: int = 0) -> DecisionTreeModel:
    """Grow a tree on the full training set.

    Induction is fully deterministic; the seed parameter exists for a uniform
    training signature and is not consumed.
    """
    if len(train) == 0:
        raise ValueError("training set must be non-empty")
    if not train.schema.attributes:
        raise ValueError("schema must declare at least one attribute")
    enc = encode_dataset(train)
    root = grow_tree(enc, np.arange(len(train)), depth=0, params=params)
    return DecisionTreeModel(schema=train.schema, labels=enc.labels, params=params, root=root)


def _route(node, row) -> Leaf:
    while not isinstance(node, Leaf):
        value = feature_value(row, node.attribute)
        if isinstance(node, NumericSplit):
            try:
                x = float(value)
            except (TypeError, ValueError):
                raise SchemaMismatchError(
                    f"attribute {node.attribute!r} expected a numeric value, got {value!r}"
                ) from None
            node = node.left if x <= node.threshold else node.right
        else:
            match = next((b for b in node.branches if b.value == value), None)
            if match is None:
                # Unseen category: follow the branch with the most training
                # rows (first in value order on ties).
                match = max(node.branches, key=lambda b: b.count)
            node = match.child
    return node


def predict_decision_tree(model: DecisionTreeModel, row) -> str:
    """Route a row from the root to a leaf and return its class label."""
    return _route(model.root, row).label
