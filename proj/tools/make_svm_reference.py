#!/usr/bin/env python3
"""Records scikit-learn SVC decision values on a seeded toy problem.

The C++ SMO solver is checked against this file. Requires scikit-learn.
"""

import json

import numpy as np
from sklearn.svm import SVC


def main():
    rng = np.random.default_rng(7)
    x = rng.uniform(0, 1, size=(160, 4))
    score = 2.0 * x[:, 1] + x[:, 0] - 1.5 * x[:, 3] + 0.3 * rng.normal(size=160)
    y = (score > 0.7).astype(int)
    train, test = x[:120], x[120:]
    clf = SVC(C=100, kernel="poly", degree=2, gamma=0.1, coef0=0.0, tol=1e-5)
    clf.fit(train, y[:120])
    out = {
        "params": {"C": 100, "degree": 2, "gamma": 0.1, "coef0": 0.0},
        "train_x": train.tolist(),
        "train_y": y[:120].tolist(),
        "test_x": test.tolist(),
        "decision": clf.decision_function(test).tolist(),
        "train_accuracy": float(clf.score(train, y[:120])),
    }
    with open("fixtures/svm/sklearn_reference.json", "w") as f:
        json.dump(out, f, indent=1)


if __name__ == "__main__":
    main()
