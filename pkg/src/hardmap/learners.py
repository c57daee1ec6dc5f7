"""Classifier pool and its cross-validated, per-instance evaluation.

Seven learner families of distinct bias, all implemented on the package's
own numeric kernels so that results are bit-reproducible across runs and
platforms. Every learner follows the same contract: fit(x, y, n_classes,
rng) then predict_proba(x) returning rows that are non-negative and sum
to 1. Class indices absent from a training split simply receive near-zero
probability; the column layout never changes.

evaluate_pool is the outer loop: for each learner and each outer fold, a
3-fold inner CV grid-searches the learner's hyper_grid by mean log-loss,
the winner is refit on the whole outer training set, and the held-out fold
receives its true-class probabilities. Per-instance log-loss uses
y = -ln(clip(p, 1e-6, 1)), so the performance space is bounded.
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .bayes import GaussianClassModel
from .dataset import lax_stratified_folds
from .rng import spawn_rng
from .trees import grow_tree

PROB_FLOOR = 1e-6

MAX_LOGLOSS = float(-np.log(PROB_FLOOR))


class PoolEvaluationError(RuntimeError):
    """A learner failed to fit or predict on a specific fold."""


def log_loss(p_true):
    """Per-instance log-loss with the probability floor applied."""
    return -np.log(np.clip(np.asarray(p_true, dtype=np.float64), PROB_FLOOR, 1.0))


# ---------------------------------------------------------------------------
# models


class KnnModel:
    """k-nearest-neighbors with vote-fraction probabilities."""

    def __init__(self, k):
        self.k = int(k)

    def fit(self, x, y, n_classes, rng=None):
        self._x = np.ascontiguousarray(x, dtype=np.float64)
        self._y = np.asarray(y, dtype=np.int64)
        self._c = n_classes
        return self

    def predict_proba(self, x):
        d2 = kernels.cross_sqdist(np.asarray(x, dtype=np.float64), self._x)
        k = min(self.k, self._x.shape[0])
        ids = np.arange(self._x.shape[0])
        out = np.empty((x.shape[0], self._c))
        for i in range(x.shape[0]):
            order = np.lexsort((ids, d2[i]))[:k]
            out[i] = np.bincount(self._y[order], minlength=self._c) / float(k)
        return out


class NaiveBayesModel:
    def __init__(self, smoothing):
        self._inner = GaussianClassModel(smoothing)

    def fit(self, x, y, n_classes, rng=None):
        self._inner.fit(x, y, n_classes)
        return self

    def predict_proba(self, x):
        return self._inner.predict_proba(x)


def _softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class SoftmaxRegression:
    """Multinomial logistic regression, L2 on weights, L-BFGS from zeros."""

    def __init__(self, lam, max_iter=500):
        self.lam = float(lam)
        self.max_iter = int(max_iter)

    def fit(self, x, y, n_classes, rng=None):
        x = np.asarray(x, dtype=np.float64)
        n, d = x.shape
        c = n_classes
        onehot = np.zeros((n, c))
        onehot[np.arange(n), y] = 1.0

        def objective(theta):
            w = theta[: c * d].reshape(c, d)
            b = theta[c * d :]
            p = _softmax(x @ w.T + b)
            ll = -np.log(np.clip(p[np.arange(n), y], 1e-300, None)).mean()
            loss = ll + 0.5 * self.lam * float((w * w).sum())
            diff = p - onehot
            gw = diff.T @ x / n + self.lam * w
            gb = diff.mean(axis=0)
            return loss, np.concatenate([gw.ravel(), gb])

        res = minimize(
            objective,
            np.zeros(c * d + c),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": self.max_iter},
        )
        self._w = res.x[: c * d].reshape(c, d)
        self._b = res.x[c * d :]
        return self

    def predict_proba(self, x):
        return _softmax(np.asarray(x, dtype=np.float64) @ self._w.T + self._b)


class LinearSvmModel:
    """One-vs-rest squared-hinge linear SVM.

    Probabilities are a logistic squashing of each signed margin, then
    normalized across classes.
    """

    def __init__(self, lam, max_iter=500):
        self.lam = float(lam)
        self.max_iter = int(max_iter)

    def fit(self, x, y, n_classes, rng=None):
        x = np.asarray(x, dtype=np.float64)
        n, d = x.shape
        self._w = np.zeros((n_classes, d))
        self._b = np.zeros(n_classes)
        for cls in range(n_classes):
            s = np.where(np.asarray(y) == cls, 1.0, -1.0)

            def objective(theta, s=s):
                w, b = theta[:d], theta[d]
                h = np.maximum(0.0, 1.0 - s * (x @ w + b))
                loss = float((h * h).mean()) + 0.5 * self.lam * float(w @ w)
                coef = -2.0 * h * s / n
                return loss, np.concatenate([x.T @ coef + self.lam * w, [coef.sum()]])

            res = minimize(
                objective,
                np.zeros(d + 1),
                jac=True,
                method="L-BFGS-B",
                options={"maxiter": self.max_iter},
            )
            self._w[cls] = res.x[:d]
            self._b[cls] = res.x[d]
        return self

    def predict_proba(self, x):
        margins = np.asarray(x, dtype=np.float64) @ self._w.T + self._b
        sig = 1.0 / (1.0 + np.exp(-margins))
        return sig / sig.sum(axis=1, keepdims=True)


class CartModel:
    def __init__(self, max_depth):
        self.max_depth = max_depth

    def fit(self, x, y, n_classes, rng=None):
        self._tree = grow_tree(x, y, n_classes, max_depth=self.max_depth)
        return self

    def predict_proba(self, x):
        return self._tree.predict_proba(x)


class RandomForestModel:
    """Bootstrap-aggregated CART trees with sqrt(d) feature sampling per split."""

    def __init__(self, n_trees, max_depth):
        self.n_trees = int(n_trees)
        self.max_depth = max_depth

    def fit(self, x, y, n_classes, rng=None):
        if rng is None:
            raise ValueError("random forest requires an rng")
        x = np.ascontiguousarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n, d = x.shape
        mtry = max(1, int(np.sqrt(d)))
        self._trees = []
        for _ in range(self.n_trees):
            rows = rng.integers(0, n, size=n)
            self._trees.append(
                grow_tree(x[rows], y[rows], n_classes,
                          max_depth=self.max_depth, mtry=mtry, rng=rng)
            )
        return self

    def predict_proba(self, x):
        acc = self._trees[0].predict_proba(x)
        for tree in self._trees[1:]:
            acc = acc + tree.predict_proba(x)
        return acc / len(self._trees)


class BoostedStumpsModel:
    """Gradient-boosted depth-1 trees with a softmax multiclass objective.

    Each round fits one stump per class to the probability residuals; leaf
    values use the standard (C-1)/C * sum(r) / sum(|r|(1-|r|)) step with a
    zero guard on the denominator.
    """

    def __init__(self, rounds, rate):
        self.rounds = int(rounds)
        self.rate = float(rate)

    @staticmethod
    def _leaf_value(r, c):
        denom = float(np.sum(np.abs(r) * (1.0 - np.abs(r))))
        if denom < 1e-16:
            return 0.0
        return (c - 1.0) / c * float(r.sum()) / denom

    def fit(self, x, y, n_classes, rng=None):
        x = np.ascontiguousarray(x, dtype=np.float64)
        n = x.shape[0]
        c = n_classes
        onehot = np.zeros((n, c))
        onehot[np.arange(n), np.asarray(y, dtype=np.int64)] = 1.0
        self._c = c
        self._stumps = []
        scores = np.zeros((n, c))
        for _ in range(self.rounds):
            p = _softmax(scores)
            layer = []
            for cls in range(c):
                r = onehot[:, cls] - p[:, cls]
                feat, thr, _ = kernels.best_sse_split(x, r)
                if feat < 0:
                    g = self._leaf_value(r, c)
                    layer.append((-1, 0.0, g, g))
                    scores[:, cls] += self.rate * g
                else:
                    mask = x[:, feat] <= thr
                    gl = self._leaf_value(r[mask], c)
                    gr = self._leaf_value(r[~mask], c)
                    layer.append((int(feat), float(thr), gl, gr))
                    scores[:, cls] += self.rate * np.where(mask, gl, gr)
            self._stumps.append(layer)
        return self

    def predict_proba(self, x):
        x = np.asarray(x, dtype=np.float64)
        scores = np.zeros((x.shape[0], self._c))
        for layer in self._stumps:
            for cls, (feat, thr, gl, gr) in enumerate(layer):
                if feat < 0:
                    scores[:, cls] += self.rate * gl
                else:
                    scores[:, cls] += self.rate * np.where(x[:, feat] <= thr, gl, gr)
        return _softmax(scores)


# ---------------------------------------------------------------------------
# pool


@dataclass(frozen=True)
class Learner:
    """A named model family with its hyperparameter grid."""

    name: str
    hyper_grid: tuple
    factory: object

    def build(self, params):
        return self.factory(**params)


def default_pool(seed=0):
    """The standard 7-learner pool. The seed is kept for signature stability;
    all randomness is drawn later, inside evaluate_pool."""
    return [
        Learner("knn", ({"k": 3}, {"k": 5}, {"k": 11}), KnnModel),
        Learner("gaussian_nb",
                ({"smoothing": 1e-9}, {"smoothing": 1e-6}), NaiveBayesModel),
        Learner("logreg",
                ({"lam": 1e-3}, {"lam": 1e-2}, {"lam": 1e-1}), SoftmaxRegression),
        Learner("linear_svm",
                ({"lam": 1e-3}, {"lam": 1e-2}, {"lam": 1e-1}), LinearSvmModel),
        Learner("cart",
                ({"max_depth": 3}, {"max_depth": 5}, {"max_depth": None}), CartModel),
        Learner("random_forest",
                ({"n_trees": 50, "max_depth": 5}, {"n_trees": 50, "max_depth": None},
                 {"n_trees": 100, "max_depth": 5}, {"n_trees": 100, "max_depth": None}),
                RandomForestModel),
        Learner("gboost",
                ({"rounds": 50, "rate": 0.1}, {"rounds": 50, "rate": 0.3},
                 {"rounds": 100, "rate": 0.1}, {"rounds": 100, "rate": 0.3}),
                BoostedStumpsModel),
    ]


@dataclass
class ProbabilityMatrix:
    """True-class probability of each instance under each tuned learner."""

    values: np.ndarray
    algorithm_names: tuple

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.min() < 0.0 or self.values.max() > 1.0:
            raise ValueError("probabilities must lie in [0, 1]")


@dataclass
class PerformanceMatrix:
    """Per-instance log-loss of each tuned learner."""

    values: np.ndarray
    algorithm_names: tuple

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.min() < 0.0 or self.values.max() > MAX_LOGLOSS + 1e-9:
            raise ValueError("log-loss out of bounds")


@dataclass
class InstanceHardnessVector:
    ih: np.ndarray

    def __post_init__(self):
        self.ih = np.ascontiguousarray(self.ih, dtype=np.float64)


def _check_proba(p):
    if p.min() < -1e-12 or np.abs(p.sum(axis=1) - 1.0).max() > 1e-9:
        raise ValueError("predicted rows must be distributions summing to 1")
    return np.clip(p, 0.0, 1.0)


def _inner_fold_count(labels, requested):
    smallest = np.bincount(labels).min() if labels.size else 0
    if smallest >= requested:
        return requested
    warnings.warn(
        f"inner CV reduced to 2 folds (smallest class has {int(smallest)} instances)",
        stacklevel=3,
    )
    return 2


def _mean_inner_loss(learner, params, x, y, n_classes, fold_of, k, seed, f, gi):
    losses = []
    for inner in range(k):
        tr = fold_of != inner
        te = ~tr
        if not te.any() or not tr.any():
            continue
        rng = spawn_rng(seed, "pool", learner.name, f, gi, inner)
        model = learner.build(params).fit(x[tr], y[tr], n_classes, rng)
        p = _check_proba(model.predict_proba(x[te]))
        losses.append(float(log_loss(p[np.arange(p.shape[0]), y[te]]).mean()))
    return float(np.mean(losses))


def evaluate_pool(dataset, folds, pool, seed=0, inner_k=3):
    """Outer-CV evaluation of every learner with inner hyperparameter tuning.

    Returns (ProbabilityMatrix, PerformanceMatrix); entry (i, j) reflects the
    fold where instance i was held out from learner j's training.
    """
    if not pool:
        raise ValueError("pool is empty")
    x, y = dataset.features, dataset.labels
    n, c = dataset.n_instances, dataset.n_classes
    prob = np.zeros((n, len(pool)))
    names = tuple(lr.name for lr in pool)
    if len(set(names)) != len(names):
        raise ValueError("learner names must be unique")

    for j, learner in enumerate(pool):
        for f in range(folds.k):
            tr_idx = folds.train_indices(f)
            te_idx = folds.test_indices(f)
            xt, yt = x[tr_idx], y[tr_idx]
            k_in = _inner_fold_count(yt, inner_k)
            inner_rng = spawn_rng(seed, "pool", learner.name, f, "innersplit")
            fold_of = lax_stratified_folds(yt, k_in, inner_rng)
            try:
                scores = [
                    _mean_inner_loss(learner, params, xt, yt, c, fold_of, k_in, seed, f, gi)
                    for gi, params in enumerate(learner.hyper_grid)
                ]
                best = int(np.argmin(scores))
                rng = spawn_rng(seed, "pool", learner.name, f, "refit")
                model = learner.build(learner.hyper_grid[best]).fit(xt, yt, c, rng)
                p = _check_proba(model.predict_proba(x[te_idx]))
            except Exception as exc:
                raise PoolEvaluationError(
                    f"learner {learner.name!r} failed on fold {f}: {exc}"
                ) from exc
            prob[te_idx, j] = p[np.arange(te_idx.shape[0]), y[te_idx]]

    pm = ProbabilityMatrix(prob, names)
    perf = PerformanceMatrix(log_loss(prob), names)
    return pm, perf


def instance_hardness(prob):
    """1 - mean true-class probability over the pool, per instance."""
    values = prob.values if isinstance(prob, ProbabilityMatrix) else np.asarray(prob)
    if values.ndim != 2 or values.shape[1] == 0:
        raise ValueError("probability matrix must have at least one column")
    return InstanceHardnessVector(1.0 - values.mean(axis=1))


def write_performance_csv(path, instance_ids, perf, ih):
    """CSV dump: per-learner log-loss columns plus instance hardness."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["instance_id"] + [f"algo_{a}_logloss" for a in perf.algorithm_names]
        writer.writerow(header + ["instance_hardness"])
        for i, row, h in zip(instance_ids, perf.values, ih.ih):
            writer.writerow([int(i), *[repr(float(v)) for v in row], repr(float(h))])
