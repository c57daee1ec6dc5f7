"""Two-dimensional linear-trend embedding of the metadata, plus hardness rotation.

The embedding minimizes

    J(A, B, C) = ||F - Z B^T||_F^2 + ||Y - Z C^T||_F^2,   Z = F A^T

over A (2 x m), B (m x 2), C (a x 2), where F is the n x m standardized
measure block and Y the n x a standardized performance block. Alternating
least squares: B and C are exact least-squares solves for fixed A, and A is
the exact two-sided solve for fixed (B, C), so the objective never increases.
Multiple restarts (one PCA-seeded, the rest random) guard against local
minima. A final rotation turns the fitted hardness gradient toward the
upper-left diagonal so the map reads the same way for every dataset.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .measures import MEASURE_NAMES
from .rng import spawn_rng

TARGET_DIRECTION = np.array([-1.0, 1.0]) / np.sqrt(2.0)


@dataclass
class ProjectionModel:
    """Fitted linear embedding: coords = R A f for standardized rows f."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    R: np.ndarray
    selected_measures: tuple
    scaling_stats: dict
    objective: float
    restarts_log: list
    histories: list = field(default=None, repr=False)

    def matrix(self):
        return self.R @ self.A


@dataclass
class Embedding:
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.ascontiguousarray(self.coords, dtype=np.float64)
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ValueError("coords must be n x 2")


def projection_objective(feature_block, performance_block, a_mat, b_mat, c_mat):
    z = feature_block @ a_mat.T
    rf = feature_block - z @ b_mat.T
    ry = performance_block - z @ c_mat.T
    return float((rf * rf).sum() + (ry * ry).sum())


def _solve_bc(feature_block, performance_block, a_mat):
    z = feature_block @ a_mat.T
    gram = z.T @ z
    b_mat = np.linalg.pinv(gram) @ (z.T @ feature_block)
    c_mat = np.linalg.pinv(gram) @ (z.T @ performance_block)
    return b_mat.T, c_mat.T


def _solve_a(feature_block, performance_block, b_mat, c_mat):
    # minimizes ||W - F T G^T||_F with T = A^T, W = [F Y], G = [B; C]
    w = np.hstack([feature_block, performance_block])
    g = np.vstack([b_mat, c_mat])
    left = np.linalg.pinv(feature_block.T @ feature_block) @ (feature_block.T @ w)
    t = left @ g @ np.linalg.pinv(g.T @ g)
    return t.T


def _als(feature_block, performance_block, a_init, tol=1e-8, max_iter=500):
    a_mat = a_init
    b_mat, c_mat = _solve_bc(feature_block, performance_block, a_mat)
    history = [projection_objective(feature_block, performance_block, a_mat, b_mat, c_mat)]
    for _ in range(max_iter):
        a_new = _solve_a(feature_block, performance_block, b_mat, c_mat)
        j_new = projection_objective(feature_block, performance_block, a_new, b_mat, c_mat)
        if j_new > history[-1]:
            break  # numeric jitter at convergence; keep the better iterate
        a_mat = a_new
        prev = history[-1]
        history.append(j_new)
        b_next, c_next = _solve_bc(feature_block, performance_block, a_mat)
        j_bc = projection_objective(feature_block, performance_block, a_mat, b_next, c_next)
        if j_bc <= history[-1]:
            b_mat, c_mat = b_next, c_next
            history[-1] = j_bc
        if prev == 0.0 or (prev - history[-1]) / prev < tol:
            break
    return a_mat, b_mat, c_mat, history


def _pca_init(feature_block):
    _, _, vt = np.linalg.svd(feature_block, full_matrices=False)
    return vt[:2].copy()


def fit_projection(meta, restarts=10, seed=0):
    """Fit the embedding by multi-restart alternating least squares.

    Runs one PCA-initialized restart plus `restarts` random ones (A entries
    uniform on [-1, 1]); keeps the lowest final objective, ties by restart
    index. The rotation R is the identity until fit_rotation replaces it.
    """
    f = np.asarray(meta.feature_block, dtype=np.float64)
    y = np.asarray(meta.performance_block, dtype=np.float64)
    n, m = f.shape
    if m < 2:
        raise ValueError("need at least 2 selected measures")
    if n <= m:
        raise ValueError(f"need more instances ({n}) than selected measures ({m})")
    if not f.any() and not y.any():
        raise ValueError("metadata is entirely constant; nothing to embed")

    inits = [_pca_init(f)]
    for r in range(restarts):
        rng = spawn_rng(seed, "projection", "restart", r)
        inits.append(rng.uniform(-1.0, 1.0, size=(2, m)))

    best = None
    log = []
    histories = []
    for a_init in inits:
        a_mat, b_mat, c_mat, history = _als(f, y, a_init)
        log.append(history[-1])
        histories.append(history)
        if best is None or history[-1] < best[3]:
            best = (a_mat, b_mat, c_mat, history[-1])

    a_mat, b_mat, c_mat, objective = best
    return ProjectionModel(
        A=a_mat,
        B=b_mat,
        C=c_mat,
        R=np.eye(2),
        selected_measures=tuple(meta.selected_measures),
        scaling_stats=meta.scaling_stats,
        objective=objective,
        restarts_log=log,
        histories=histories,
    )


def embed_training(model, meta):
    """Coordinates of the training instances under the (possibly rotated) model."""
    return Embedding(meta.feature_block @ model.matrix().T)


def hardness_direction(coords, ih):
    """OLS slope vector of ih against the two coordinates."""
    design = np.column_stack([coords, np.ones(coords.shape[0])])
    sol, *_ = np.linalg.lstsq(design, np.asarray(ih, dtype=np.float64), rcond=None)
    return sol[:2]


def fit_rotation(model, embedding_pre_rotation, ih):
    """Set R so the fitted hardness gradient points to the upper-left diagonal.

    Returns the same model with R replaced; a constant (or hardness-blind)
    embedding keeps the identity and warns instead of failing.
    """
    ih = ih.ih if hasattr(ih, "ih") else np.asarray(ih, dtype=np.float64)
    w = hardness_direction(embedding_pre_rotation.coords, ih)
    norm = float(np.hypot(w[0], w[1]))
    if np.ptp(ih) == 0.0 or norm == 0.0:
        warnings.warn("hardness is constant; rotation left at identity")
        model.R = np.eye(2)
        return model
    phi = np.arctan2(TARGET_DIRECTION[1], TARGET_DIRECTION[0]) - np.arctan2(w[1], w[0])
    c, s = np.cos(phi), np.sin(phi)
    model.R = np.array([[c, -s], [s, c]])
    return model


def project(model, hardness_row):
    """Map one instance's measure values to (z1, z2).

    Accepts a mapping {measure name: value} or a full 13-vector in the
    canonical column order; only the model's selected measures are used.
    """
    if isinstance(hardness_row, dict):
        try:
            raw = [hardness_row[name] for name in model.selected_measures]
        except KeyError as exc:
            raise ValueError(f"missing measure value: {exc.args[0]}") from exc
    else:
        row = np.asarray(hardness_row, dtype=np.float64).ravel()
        if row.shape[0] != len(MEASURE_NAMES):
            raise ValueError(f"expected {len(MEASURE_NAMES)} measure values")
        raw = [row[MEASURE_NAMES.index(name)] for name in model.selected_measures]

    std = []
    for name, value in zip(model.selected_measures, raw):
        mean, sd = model.scaling_stats["measures"][name]
        std.append(0.0 if sd == 0.0 else (float(value) - mean) / sd)
    z = model.matrix() @ np.array(std)
    return float(z[0]), float(z[1])
