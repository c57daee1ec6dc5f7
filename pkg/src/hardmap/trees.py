"""Classification trees grown on Gini impurity, with cost-complexity pruning.

Trees are stored as flat parallel arrays. Growth is depth-first with an
explicit stack so node numbering is a pure function of the data (root = 0,
left subtree before right). Splits send x[feature] <= threshold to the left
child. Ties between candidate splits resolve to the lowest feature index,
then the lowest threshold.
"""

import numpy as np

from . import kernels

_LEAF = -1


class CartTree:
    """A fitted binary classification tree.

    Attributes
    ----------
    feature, threshold : per-node split description (-1 / nan on leaves)
    left, right : child node ids (-1 on leaves)
    counts : per-node class histogram of the training instances it saw
    depth : per-node depth, root = 0
    """

    def __init__(self, feature, threshold, left, right, counts, depth):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.float64)
        self.depth = np.asarray(depth, dtype=np.int64)

    @property
    def n_nodes(self):
        return self.feature.shape[0]

    @property
    def n_classes(self):
        return self.counts.shape[1]

    def is_leaf(self, node):
        return self.left[node] == _LEAF

    def leaf_ids(self):
        return np.nonzero(self.left == _LEAF)[0]

    def max_leaf_depth(self):
        return int(self.depth[self.leaf_ids()].max())

    def apply(self, x):
        """Leaf id reached by each row of x."""
        x = np.asarray(x, dtype=np.float64)
        out = np.empty(x.shape[0], dtype=np.int64)
        for i in range(x.shape[0]):
            node = 0
            while self.left[node] != _LEAF:
                if x[i, self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[i] = node
        return out

    def predict_proba(self, x):
        leaves = self.apply(x)
        c = self.counts[leaves]
        return c / c.sum(axis=1, keepdims=True)

    def leaf_depths(self, x):
        return self.depth[self.apply(x)]


def _node_gini(count_row, m):
    p = count_row / m
    return 1.0 - float((p * p).sum())


def grow_tree(x, y, n_classes, max_depth=None, min_leaf=1, mtry=None, rng=None):
    """Grow an unpruned CART tree.

    mtry, when set, samples that many feature columns (without replacement,
    via rng) at every node before the split search; candidates keep their
    original indices so tie-breaking is unaffected by the sampling order.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    limit = np.inf if max_depth is None else int(max_depth)
    if mtry is not None and rng is None:
        raise ValueError("mtry requires an rng")

    feature, threshold, left, right, counts, depth = [], [], [], [], [], []

    def new_node(idx, d):
        c = np.bincount(y[idx], minlength=n_classes).astype(np.float64)
        feature.append(_LEAF)
        threshold.append(np.nan)
        left.append(_LEAF)
        right.append(_LEAF)
        counts.append(c)
        depth.append(d)
        return len(feature) - 1

    root_idx = np.arange(x.shape[0], dtype=np.int64)
    stack = [(new_node(root_idx, 0), root_idx)]
    while stack:
        node, idx = stack.pop()
        m = idx.shape[0]
        c = counts[node]
        g_node = _node_gini(c, m)
        if g_node == 0.0 or depth[node] >= limit or m < 2 * min_leaf:
            continue
        xs = x[idx]
        if mtry is not None and mtry < x.shape[1]:
            cols = np.sort(rng.choice(x.shape[1], size=mtry, replace=False))
            feat, thr, score = kernels.best_gini_split(
                np.ascontiguousarray(xs[:, cols]), y[idx], n_classes, min_leaf
            )
            if feat >= 0:
                feat = int(cols[feat])
        else:
            feat, thr, score = kernels.best_gini_split(xs, y[idx], n_classes, min_leaf)
        if feat < 0 or not score < g_node:
            continue
        mask = xs[:, feat] <= thr
        li, ri = idx[mask], idx[~mask]
        feature[node] = feat
        threshold[node] = thr
        lid = new_node(li, depth[node] + 1)
        rid = new_node(ri, depth[node] + 1)
        left[node] = lid
        right[node] = rid
        # right first so the left subtree is numbered before the right one
        stack.append((rid, ri))
        stack.append((lid, li))

    return CartTree(feature, threshold, left, right, counts, depth)


def _subtree_stats(tree, keep_internal):
    """Per-node (leaf count, subtree error) under a pruning overlay.

    keep_internal[v] False treats v as a collapsed leaf. Errors are absolute
    misclassified training counts, additive over leaves.
    """
    n = tree.n_nodes
    leaves = np.zeros(n, dtype=np.int64)
    err = np.zeros(n)
    # children have larger ids than parents, so reverse order is bottom-up
    for v in range(n - 1, -1, -1):
        if tree.left[v] == _LEAF or not keep_internal[v]:
            leaves[v] = 1
            err[v] = tree.counts[v].sum() - tree.counts[v].max()
        else:
            leaves[v] = leaves[tree.left[v]] + leaves[tree.right[v]]
            err[v] = err[tree.left[v]] + err[tree.right[v]]
    return leaves, err


def prune_tree(tree, alpha):
    """Weakest-link cost-complexity pruning.

    Repeatedly collapses the internal node with the smallest
    g(t) = (R(t) - R(subtree)) / (leaves - 1) while that minimum is <= alpha;
    ties collapse the lowest node id. R is the training misclassification
    rate contribution. Returns a new, compacted tree.
    """
    n_total = tree.counts[0].sum()
    keep = tree.left != _LEAF
    while True:
        leaves, err = _subtree_stats(tree, keep)
        best_g, best_v = np.inf, -1
        for v in np.nonzero(keep)[0]:
            node_err = tree.counts[v].sum() - tree.counts[v].max()
            g = (node_err - err[v]) / n_total / (leaves[v] - 1)
            if g < best_g:
                best_g, best_v = g, int(v)
        if best_v < 0 or best_g > alpha:
            break
        keep[best_v] = False
        # descendants of a collapsed node are gone entirely
        drop = [tree.left[best_v], tree.right[best_v]]
        while drop:
            v = drop.pop()
            keep[v] = False
            if tree.left[v] != _LEAF:
                drop.extend((tree.left[v], tree.right[v]))

    # compact: retain the root plus every node whose parent stayed internal
    retained = np.zeros(tree.n_nodes, dtype=bool)
    retained[0] = True
    for v in range(tree.n_nodes):
        if retained[v] and keep[v]:
            retained[tree.left[v]] = True
            retained[tree.right[v]] = True
    remap = np.cumsum(retained) - 1
    ids = np.nonzero(retained)[0]
    feature = np.where(keep[ids], tree.feature[ids], _LEAF)
    threshold = np.where(keep[ids], tree.threshold[ids], np.nan)
    left = np.where(keep[ids], remap[tree.left[ids]], _LEAF)
    right = np.where(keep[ids], remap[tree.right[ids]], _LEAF)
    return CartTree(feature, threshold, left, right, tree.counts[ids], tree.depth[ids])
