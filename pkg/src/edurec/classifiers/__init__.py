"""From-scratch classifiers: decision tree, random forest and naive Bayes."""

from .artifact import (
    FORMAT_VERSION,
    ModelFormatError,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
    serialize_model,
)
from .forest import ForestParams, RandomForestModel, predict_random_forest, train_random_forest
from .naive_bayes import (
    NaiveBayesModel,
    NbParams,
    nb_log_scores,
    nb_posterior,
    predict_naive_bayes,
    softmax,
    train_naive_bayes,
)
from .tree import (
    Branch,
    CategoricalSplit,
    DecisionTreeModel,
    Leaf,
    NumericSplit,
    SchemaMismatchError,
    TreeParams,
    entropy,
    feature_value,
    information_gain,
    predict_decision_tree,
    train_decision_tree,
)

__all__ = [
    "FORMAT_VERSION",
    "ModelFormatError",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
    "serialize_model",
    "ForestParams",
    "RandomForestModel",
    "predict_random_forest",
    "train_random_forest",
    "NaiveBayesModel",
    "NbParams",
    "nb_log_scores",
    "nb_posterior",
    "predict_naive_bayes",
    "softmax",
    "train_naive_bayes",
    "Branch",
    "CategoricalSplit",
    "DecisionTreeModel",
    "Leaf",
    "NumericSplit",
    "SchemaMismatchError",
    "TreeParams",
    "entropy",
    "feature_value",
    "information_gain",
    "predict_decision_tree",
    "train_decision_tree",
]
