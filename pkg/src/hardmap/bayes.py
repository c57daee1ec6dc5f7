"""Gaussian naive Bayes shared by the likelihood measures and the learner pool."""

import numpy as np

_LOG_2PI = float(np.log(2.0 * np.pi))


class GaussianClassModel:
    """Per-class, per-feature Gaussian densities with frequency priors.

    Variances are floored at smoothing x (largest per-feature variance over
    the whole training set), so constant features never divide by zero; if
    every feature is constant the absolute smoothing value is used. Classes
    absent from the training labels keep prior 0 and never win probability
    mass.
    """

    def __init__(self, smoothing=1e-9):
        self.smoothing = float(smoothing)
        self.means = None
        self.variances = None
        self.log_priors = None

    def fit(self, x, y, n_classes):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n, d = x.shape
        counts = np.bincount(y, minlength=n_classes).astype(np.float64)
        global_var = x.var(axis=0)
        top = float(global_var.max()) if d else 0.0
        floor = self.smoothing * top if top > 0.0 else self.smoothing

        self.means = np.zeros((n_classes, d))
        self.variances = np.full((n_classes, d), floor)
        for c in range(n_classes):
            rows = x[y == c]
            if rows.shape[0] == 0:
                continue
            self.means[c] = rows.mean(axis=0)
            self.variances[c] = np.maximum(rows.var(axis=0), floor)
        with np.errstate(divide="ignore"):
            self.log_priors = np.log(counts / n)
        return self

    def log_joint(self, x):
        """log prior + summed per-feature log densities, n x classes."""
        x = np.asarray(x, dtype=np.float64)
        out = np.empty((x.shape[0], self.means.shape[0]))
        for c in range(self.means.shape[0]):
            if np.isneginf(self.log_priors[c]):
                out[:, c] = -np.inf
                continue
            var = self.variances[c]
            dev = x - self.means[c]
            ll = -0.5 * (_LOG_2PI + np.log(var)) - (dev * dev) / (2.0 * var)
            out[:, c] = self.log_priors[c] + ll.sum(axis=1)
        return out

    def predict_proba(self, x):
        lj = self.log_joint(x)
        lj = lj - lj.max(axis=1, keepdims=True)
        p = np.exp(lj)
        return p / p.sum(axis=1, keepdims=True)
