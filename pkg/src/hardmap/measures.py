"""Per-instance hardness measures.

Thirteen meta-features, one column each, all oriented so that higher values
mean harder to classify and all bounded in [0, 1]. Column order is fixed:

    kDN, DCP, TD_P, TD_U, CL, CLD, F1, N1, N2, LSC, LSR, U, H

kDN   fraction of k nearest neighbors with a different label
DCP   impurity of the instance's leaf in an unpruned CART tree
TD_P  leaf depth in a cost-complexity-pruned CART tree / max leaf depth
TD_U  leaf depth in the unpruned tree / max leaf depth
CL    1 - naive-Bayes posterior of the true class
CLD   rescaled gap between the true-class posterior and the best rival
F1    fraction of features whose class-overlap interval contains the instance
N1    fraction of MST neighbors with a different label
N2    nearest intra-class distance / (intra + extra)
LSC   1 - |local set| / (class size - 1)
LSR   1 - normalized local-set radius
U     1 - reverse local-set membership / (class size - 1)
H     fraction of other-class instances whose nearest enemy this is
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bayes import GaussianClassModel
from .dataset import lax_stratified_folds
from .rng import spawn_rng
from .trees import grow_tree, prune_tree

MEASURE_NAMES = (
    "kDN", "DCP", "TD_P", "TD_U", "CL", "CLD", "F1",
    "N1", "N2", "LSC", "LSR", "U", "H",
)

PRUNE_ALPHA_GRID = (0.0, 0.001, 0.005, 0.01, 0.05)

_CLIP_FLOOR = 1e-6


@dataclass
class MeasureConfig:
    """Knobs for the measure computations."""

    kdn_k: int = 5
    nb_smoothing: float = 1e-9
    seed: int = 0


@dataclass
class HardnessMatrix:
    """n x 13 matrix of hardness measures in the fixed column order."""

    values: np.ndarray
    measure_names: tuple = MEASURE_NAMES

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape[1] != len(self.measure_names):
            raise ValueError("column count does not match measure names")
        if np.isnan(self.values).any():
            raise ValueError("hardness matrix contains NaN")
        if self.values.min() < 0.0 or self.values.max() > 1.0:
            raise ValueError("hardness values must lie in [0, 1]")

    def column(self, name):
        return self.values[:, self.measure_names.index(name)]


class MstGraph:
    """Minimum spanning tree over the full Euclidean graph."""

    def __init__(self, edges, n):
        self.edges = np.asarray(edges, dtype=np.int64)
        self.n = int(n)
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(int(b))
            adj[b].append(int(a))
        self.adjacency = [np.array(sorted(nb), dtype=np.int64) for nb in adj]

    def total_weight(self, dist):
        return float(dist[self.edges[:, 0], self.edges[:, 1]].sum())


def build_mst(distance_index):
    edges = kernels.prim_mst(distance_index.sqdist)
    return MstGraph(edges, distance_index.n)


class LocalSetIndex:
    """Nearest enemies, local sets, and their reverse memberships.

    The local set of x holds the same-class instances strictly closer to x
    than x's nearest enemy (the closest instance of any other class,
    distance ties resolved to the lowest id).
    """

    def __init__(self, labels, distance_index):
        labels = np.asarray(labels, dtype=np.int64)
        n = labels.shape[0]
        dist = distance_index.dist
        self.nearest_enemy = np.empty(n, dtype=np.int64)
        self.enemy_dist = np.empty(n)
        self.local_sets = []
        for i in range(n):
            order = distance_index.neighbor_order(i)
            enemies = order[labels[order] != labels[i]]
            ne = int(enemies[0])
            self.nearest_enemy[i] = ne
            self.enemy_dist[i] = dist[i, ne]
            same = np.nonzero(labels == labels[i])[0]
            same = same[same != i]
            self.local_sets.append(same[dist[i, same] < self.enemy_dist[i]])
        self.reverse_counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for z in self.local_sets[i]:
                self.reverse_counts[z] += 1


def build_local_sets(dataset, distance_index):
    return LocalSetIndex(dataset.labels, distance_index)


def measure_kdn(dataset, distance_index, k=5):
    """Fraction of the k nearest neighbors that disagree with the label."""
    n = dataset.n_instances
    if not 1 <= k < n:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    labels = dataset.labels
    out = np.empty(n)
    for i in range(n):
        nb = distance_index.kneighbors(i, k)
        out[i] = float(np.count_nonzero(labels[nb] != labels[i])) / k
    return out


def _mean_cv_logloss(x, y, n_classes, alpha, fold_of, k):
    losses = []
    for f in range(k):
        tr = fold_of != f
        te = ~tr
        if not te.any():
            continue
        tree = prune_tree(grow_tree(x[tr], y[tr], n_classes), alpha)
        p = tree.predict_proba(x[te])
        p_true = p[np.arange(p.shape[0]), y[te]]
        losses.append(float(-np.log(np.clip(p_true, _CLIP_FLOOR, 1.0)).mean()))
    return float(np.mean(losses))


def select_prune_alpha(dataset, seed, grid=PRUNE_ALPHA_GRID):
    """Pick the pruning penalty by 3-fold CV log-loss; ties keep the larger penalty."""
    rng = spawn_rng(seed, "measures", "prune_alpha")
    fold_of = lax_stratified_folds(dataset.labels, 3, rng)
    x, y, c = dataset.features, dataset.labels, dataset.n_classes
    scores = [_mean_cv_logloss(x, y, c, a, fold_of, 3) for a in grid]
    best = min(range(len(grid)), key=lambda i: (scores[i], -grid[i]))
    return float(grid[best])


def _depth_fraction(tree, x):
    depths = tree.leaf_depths(x).astype(np.float64)
    top = tree.max_leaf_depth()
    return depths / top if top > 0 else np.zeros(x.shape[0])


def measure_tree_based(dataset, seed=0):
    """(DCP, TD_P, TD_U) from one unpruned and one pruned CART tree."""
    x, y = dataset.features, dataset.labels
    tree = grow_tree(x, y, dataset.n_classes)
    leaves = tree.apply(x)
    sizes = tree.counts[leaves].sum(axis=1)
    own = tree.counts[leaves, y]
    dcp = 1.0 - own / sizes
    td_u = _depth_fraction(tree, x)
    alpha = select_prune_alpha(dataset, seed)
    td_p = _depth_fraction(prune_tree(tree, alpha), x)
    return dcp, td_p, td_u


def measure_likelihood(dataset, smoothing=1e-9):
    """(CL, CLD) from Gaussian naive-Bayes posteriors on the full dataset."""
    model = GaussianClassModel(smoothing).fit(
        dataset.features, dataset.labels, dataset.n_classes
    )
    post = model.predict_proba(dataset.features)
    idx = np.arange(dataset.n_instances)
    p_true = post[idx, dataset.labels]
    rival = post.copy()
    rival[idx, dataset.labels] = -np.inf
    p_rival = rival.max(axis=1)
    cl = 1.0 - p_true
    cld = (1.0 - (p_true - p_rival)) / 2.0
    return cl, cld


def measure_f1(dataset):
    """Fraction of features that place the instance inside the class-overlap zone."""
    x, y = dataset.features, dataset.labels
    n, d = x.shape
    lo = np.full(d, -np.inf)
    hi = np.full(d, np.inf)
    for c in range(dataset.n_classes):
        rows = x[y == c]
        lo = np.maximum(lo, rows.min(axis=0))
        hi = np.minimum(hi, rows.max(axis=0))
    inside = (x >= lo) & (x <= hi) & (lo <= hi)
    return inside.sum(axis=1) / float(d)


def measure_n1(dataset, mst):
    """Fraction of MST-adjacent instances with a different label."""
    labels = dataset.labels
    out = np.empty(dataset.n_instances)
    for i, nb in enumerate(mst.adjacency):
        out[i] = float(np.count_nonzero(labels[nb] != labels[i])) / nb.shape[0]
    return out


def measure_n2(dataset, distance_index):
    """Nearest intra-class distance relative to intra + extra."""
    labels = dataset.labels
    dist = distance_index.dist
    n = dataset.n_instances
    out = np.empty(n)
    for i in range(n):
        same = np.nonzero(labels == labels[i])[0]
        same = same[same != i]
        other = np.nonzero(labels != labels[i])[0]
        d_in = float(dist[i, same].min())
        d_out = float(dist[i, other].min())
        out[i] = 0.5 if d_in == 0.0 and d_out == 0.0 else d_in / (d_in + d_out)
    return out


def measure_local_sets(dataset, distance_index, ls):
    """(LSC, LSR, U, H) from the local-set index."""
    labels = dataset.labels
    dist = distance_index.dist
    n = dataset.n_instances
    counts = dataset.class_counts()
    lsc = np.empty(n)
    lsr = np.empty(n)
    use = np.empty(n)
    for i in range(n):
        n_c = counts[labels[i]]
        same = np.nonzero(labels == labels[i])[0]
        same = same[same != i]
        lsc[i] = 1.0 - ls.local_sets[i].shape[0] / (n_c - 1.0)
        top = float(dist[i, same].max())
        lsr[i] = 1.0 if top == 0.0 else 1.0 - min(1.0, ls.enemy_dist[i] / top)
        use[i] = 1.0 - ls.reverse_counts[i] / (n_c - 1.0)
    enemy_of = np.bincount(ls.nearest_enemy, minlength=n).astype(np.float64)
    harm = enemy_of / (n - counts[labels]).astype(np.float64)
    return lsc, lsr, use, harm


def compute_hardness_matrix(dataset, config=None, distance_index=None):
    """All 13 measures for every instance, in the fixed column order."""
    from .dataset import build_distance_index

    config = config or MeasureConfig()
    if distance_index is None:
        distance_index = build_distance_index(dataset)
    mst = build_mst(distance_index)
    ls = build_local_sets(dataset, distance_index)

    kdn = measure_kdn(dataset, distance_index, config.kdn_k)
    dcp, td_p, td_u = measure_tree_based(dataset, config.seed)
    cl, cld = measure_likelihood(dataset, config.nb_smoothing)
    f1 = measure_f1(dataset)
    n1 = measure_n1(dataset, mst)
    n2 = measure_n2(dataset, distance_index)
    lsc, lsr, use, harm = measure_local_sets(dataset, distance_index, ls)

    values = np.column_stack(
        [kdn, dcp, td_p, td_u, cl, cld, f1, n1, n2, lsc, lsr, use, harm]
    )
    return HardnessMatrix(values)


def write_measures_csv(path, instance_ids, matrix):
    """CSV dump: instance_id column followed by the 13 measure columns."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["instance_id", *matrix.measure_names])
        for i, row in zip(instance_ids, matrix.values):
            writer.writerow([int(i), *[repr(float(v)) for v in row]])
