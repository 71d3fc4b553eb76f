"""Train the softmax classifier and check its gradients numerically.

Run:  python demos/03_classifier_training.py
"""

import numpy as np

from newsdesk.classifier import (
    ClassifierModel,
    Hyper,
    evaluate,
    loss_and_gradient,
    predict,
    train,
)
from newsdesk.features import FeatureMatrix


def matrix(values):
    values = np.asarray(values, dtype=float)
    return FeatureMatrix(rows=[f"r{i}" for i in range(values.shape[0])],
                         columns=[f"f{j}" for j in range(values.shape[1])],
                         values=values, mode="tfidf")


# 1. The separable toy: two one-hot points repeated ten times. Full-batch
# gradient descent from zero weights must drive training accuracy to 100%.
X = matrix([[1.0, 0.0], [0.0, 1.0]] * 10)
labels = ["jobs", "rent"] * 10
model = train(X, labels, Hyper(learning_rate=0.5, epochs=500))
meta = model.training_meta
print(f"epochs run: {meta['epochs_run']}, final loss: {meta['final_loss']:.6f}")
print("training accuracy:", evaluate(model, X, labels).accuracy)

# 2. Loss history is non-increasing by construction: a step that fails to
# improve the loss by the tolerance is rejected and training stops.
history = model.loss_history
print("loss monotone:", all(b <= a for a, b in zip(history, history[1:])))

# 3. Spot-check the analytic gradient against central finite differences
# on one random parameter.
rng = np.random.default_rng(3)
Xr = matrix(rng.normal(size=(5, 4)))
classes = ["a", "b", "c"]
yr = [classes[k] for k in rng.integers(0, 3, size=5)]
weights, bias = rng.normal(size=(3, 4)), rng.normal(size=3)
probe = ClassifierModel(classes=classes, schema_digest=Xr.schema_digest(),
                        weights=weights, bias=bias, training_meta={"l2_lambda": 1e-3})
loss, grad_w, _ = loss_and_gradient(probe, Xr, yr)

h = 1e-5
bumped_up = weights.copy(); bumped_up[1, 2] += h
bumped_dn = weights.copy(); bumped_dn[1, 2] -= h
up = ClassifierModel(classes=classes, schema_digest=Xr.schema_digest(),
                     weights=bumped_up, bias=bias, training_meta={"l2_lambda": 1e-3})
dn = ClassifierModel(classes=classes, schema_digest=Xr.schema_digest(),
                     weights=bumped_dn, bias=bias, training_meta={"l2_lambda": 1e-3})
numeric = (loss_and_gradient(up, Xr, yr)[0] - loss_and_gradient(dn, Xr, yr)[0]) / (2 * h)
print(f"analytic dL/dW[1,2] = {grad_w[1, 2]:.10f}")
print(f"numeric  dL/dW[1,2] = {numeric:.10f}")

# 4. Ties in the argmax resolve to the lowest class index, deterministically.
flat = ClassifierModel(classes=classes, schema_digest=Xr.schema_digest(),
                       weights=np.zeros((3, 4)), bias=np.zeros(3), training_meta={})
print("all-zero model predicts:", set(predict(flat, Xr)))
