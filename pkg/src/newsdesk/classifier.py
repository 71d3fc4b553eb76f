"""Multinomial logistic regression trained by full-batch gradient descent.

The loss is mean cross-entropy plus an L2 penalty on the weights (bias
excluded). Zero initialization and full-batch updates keep training fully
deterministic; the seed is carried in the hyperparameters for future
stochastic extensions but is not consumed here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateLabels,
    LengthMismatch,
    NonFiniteInput,
    NonFiniteLoss,
    SchemaMismatch,
)
from .features import FeatureMatrix


@dataclass(frozen=True)
class Hyper:
    learning_rate: float = 0.5
    epochs: int = 500
    l2_lambda: float = 1e-4
    seed: int = 0
    tolerance: float = 1e-9


@dataclass
class ClassifierModel:
    """Softmax-regression weights plus the schema they were trained against."""

    classes: list[str]
    schema_digest: int
    weights: np.ndarray  # (C, M)
    bias: np.ndarray     # (C,)
    training_meta: dict
    loss_history: list[float] = field(default_factory=list, repr=False)  # in-memory only

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if len(self.classes) < 2:
            raise DegenerateLabels("a classifier needs at least two classes")
        if self.weights.shape[0] != len(self.classes) or self.bias.shape != (len(self.classes),):
            raise SchemaMismatch("weight/bias dimensions do not match the class list")
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise NonFiniteInput("model parameters must be finite")

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise stable softmax (max-subtracted); accepts a vector or a matrix."""
    z = np.asarray(logits, dtype=np.float64)
    if not np.isfinite(z).all():
        raise NonFiniteInput("softmax input must be finite")
    shifted = z - z.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _check_schema(model: ClassifierModel, X: FeatureMatrix) -> None:
    if X.schema_digest() != model.schema_digest:
        raise SchemaMismatch("feature matrix schema differs from the model's training schema")
    if X.m != model.n_features:
        raise SchemaMismatch(f"matrix has {X.m} columns, model expects {model.n_features}")


def _label_indices(labels: list, classes: list[str]) -> np.ndarray:
    index = {c: k for k, c in enumerate(classes)}
    try:
        return np.array([index[label] for label in labels], dtype=np.intp)
    except KeyError as exc:
        raise SchemaMismatch(f"label {exc.args[0]!r} is not in the model's class set") from None


def _loss_and_gradient_arrays(weights, bias, X, y_idx, l2_lambda):
    n = X.shape[0]
    probs = softmax(X @ weights.T + bias)
    picked = probs[np.arange(n), y_idx]
    loss = -np.log(np.maximum(picked, 1e-300)).mean() + 0.5 * l2_lambda * float((weights ** 2).sum())
    grad_logits = probs
    grad_logits[np.arange(n), y_idx] -= 1.0
    grad_logits /= n
    grad_weights = grad_logits.T @ X + l2_lambda * weights
    grad_bias = grad_logits.sum(axis=0)
    return loss, grad_weights, grad_bias


def loss_and_gradient(model: ClassifierModel, X: FeatureMatrix, Y: list):
    """Mean cross-entropy + L2 penalty, with its exact analytic gradients."""
    _check_schema(model, X)
    if len(Y) != X.n:
        raise LengthMismatch(f"{len(Y)} labels for {X.n} matrix rows")
    y_idx = _label_indices(Y, model.classes)
    l2 = model.training_meta.get("l2_lambda", 0.0)
    return _loss_and_gradient_arrays(model.weights, model.bias, X.values, y_idx, l2)


def train(X: FeatureMatrix, Y: list, hyper: Hyper = Hyper()) -> ClassifierModel:
    """Fit softmax regression; deterministic given identical inputs.

    Each epoch takes one full-batch step; a step that improves the loss by
    less than ``tolerance`` is rejected and training stops, so the recorded
    loss history is non-increasing by construction.
    """
    if len(Y) != X.n:
        raise LengthMismatch(f"{len(Y)} labels for {X.n} matrix rows")
    classes = sorted(set(Y))
    if len(classes) < 2:
        raise DegenerateLabels(f"training needs at least two classes, got {classes}")
    y_idx = _label_indices(list(Y), classes)

    data = X.values
    weights = np.zeros((len(classes), X.m))
    bias = np.zeros(len(classes))
    loss, grad_w, grad_b = _loss_and_gradient_arrays(weights, bias, data, y_idx, hyper.l2_lambda)
    history = [loss]
    epochs_run = 0
    for _ in range(hyper.epochs):
        new_weights = weights - hyper.learning_rate * grad_w
        new_bias = bias - hyper.learning_rate * grad_b
        new_loss, new_grad_w, new_grad_b = _loss_and_gradient_arrays(
            new_weights, new_bias, data, y_idx, hyper.l2_lambda)
        if not np.isfinite(new_loss):
            raise NonFiniteLoss(
                f"loss diverged after {epochs_run} epochs at learning rate {hyper.learning_rate}")
        if loss - new_loss < hyper.tolerance:
            break
        weights, bias = new_weights, new_bias
        loss, grad_w, grad_b = new_loss, new_grad_w, new_grad_b
        history.append(loss)
        epochs_run += 1

    return ClassifierModel(
        classes=classes,
        schema_digest=X.schema_digest(),
        weights=weights,
        bias=bias,
        training_meta={
            "seed": hyper.seed,
            "epochs_run": epochs_run,
            "final_loss": loss,
            "learning_rate": hyper.learning_rate,
            "l2_lambda": hyper.l2_lambda,
        },
        loss_history=history,
    )


def predict(model: ClassifierModel, X: FeatureMatrix) -> list:
    """Argmax class per row; ties resolve to the lowest class index."""
    _check_schema(model, X)
    logits = X.values @ model.weights.T + model.bias
    return [model.classes[k] for k in np.argmax(logits, axis=1)]


@dataclass
class EvalReport:
    accuracy: float
    per_class_precision: dict
    per_class_recall: dict
    confusion: np.ndarray  # (C, C); rows = true class, columns = predicted
    n: int
    undefined_precision: list = field(default_factory=list)
    undefined_recall: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class_precision": self.per_class_precision,
            "per_class_recall": self.per_class_recall,
            "confusion": self.confusion.tolist(),
            "n": self.n,
            "undefined_precision": self.undefined_precision,
            "undefined_recall": self.undefined_recall,
        }


def evaluate(model: ClassifierModel, X: FeatureMatrix, Y_true: list) -> EvalReport:
    """Confusion-matrix metrics; zero-denominator precision/recall report 0 with a flag."""
    predictions = predict(model, X)
    if len(Y_true) != X.n:
        raise LengthMismatch(f"{len(Y_true)} labels for {X.n} matrix rows")
    true_idx = _label_indices(list(Y_true), model.classes)
    pred_idx = _label_indices(predictions, model.classes)
    c = model.n_classes
    confusion = np.zeros((c, c), dtype=np.int64)
    np.add.at(confusion, (true_idx, pred_idx), 1)

    n = len(Y_true)
    precision, recall = {}, {}
    undefined_p, undefined_r = [], []
    for k, cls in enumerate(model.classes):
        predicted = confusion[:, k].sum()
        actual = confusion[k, :].sum()
        if predicted == 0:
            precision[cls] = 0.0
            undefined_p.append(cls)
        else:
            precision[cls] = confusion[k, k] / predicted
        if actual == 0:
            recall[cls] = 0.0
            undefined_r.append(cls)
        else:
            recall[cls] = confusion[k, k] / actual
    return EvalReport(
        accuracy=float(np.trace(confusion)) / n,
        per_class_precision=precision,
        per_class_recall=recall,
        confusion=confusion,
        n=n,
        undefined_precision=undefined_p,
        undefined_recall=undefined_r,
    )


# --- persistence ------------------------------------------------------------

def save_model(model: ClassifierModel, path: str | Path) -> None:
    """Write the model file; float repr round-trips, so identical models yield identical bytes."""
    record = {
        "classes": model.classes,
        "schema_digest": model.schema_digest,
        "weights": [float(v) for v in model.weights.reshape(-1)],
        "bias": [float(v) for v in model.bias],
        "training_meta": model.training_meta,
    }
    Path(path).write_text(
        json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> ClassifierModel:
    record = json.loads(Path(path).read_text(encoding="utf-8"))
    classes = list(record["classes"])
    flat = np.array(record["weights"], dtype=np.float64)
    if flat.size % len(classes) != 0:
        raise SchemaMismatch("weight array length is not a multiple of the class count")
    weights = flat.reshape(len(classes), flat.size // len(classes))
    return ClassifierModel(
        classes=classes,
        schema_digest=int(record["schema_digest"]),
        weights=weights,
        bias=np.array(record["bias"], dtype=np.float64),
        training_meta=dict(record["training_meta"]),
    )
