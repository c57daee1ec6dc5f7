"""NumPy implementations of the numeric kernels.

The compiled backend (_ckern) mirrors every function here. Both backends use
the same accumulation order in every formula so their outputs are identical
bit for bit, which keeps pipeline results independent of the backend choice.
"""

import numpy as np

_INF = float("inf")
_NAN = float("nan")


def pairwise_sqdist(x):
    """Full matrix of squared Euclidean distances, accumulated feature by feature."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    n = x.shape[0]
    out = np.zeros((n, n), dtype=np.float64)
    for j in range(x.shape[1]):
        col = x[:, j]
        diff = col[:, None] - col[None, :]
        out += diff * diff
    return out


def cross_sqdist(a, b):
    """Squared Euclidean distances between two point sets (rows of a vs rows of b)."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    out = np.zeros((a.shape[0], b.shape[0]), dtype=np.float64)
    for j in range(a.shape[1]):
        diff = a[:, j][:, None] - b[:, j][None, :]
        out += diff * diff
    return out


def best_gini_split(x, y, n_classes, min_leaf=1):
    """Best (feature, threshold) by weighted child Gini.

    Candidates are midpoints between consecutive distinct sorted values.
    Ties broken by lowest feature index, then lowest threshold. Returns
    (-1, nan, inf) when no valid candidate exists.
    """
    m, d = x.shape
    if m < 2 or m < 2 * min_leaf:
        return -1, _NAN, _INF
    order = np.argsort(x, axis=0, kind="stable")
    xs = np.take_along_axis(x, order, axis=0)
    ys = y[order]
    onehot = ys[:, :, None] == np.arange(n_classes)[None, None, :]
    cum = np.cumsum(onehot, axis=0, dtype=np.float64)
    total = cum[-1]
    nl = np.arange(1, m, dtype=np.float64)[:, None]
    nr = m - nl
    left = cum[:-1]
    right = total[None, :, :] - left
    pl = left / nl[:, :, None]
    pr = right / nr[:, :, None]
    gl = 1.0 - (pl * pl).sum(axis=-1)
    gr = 1.0 - (pr * pr).sum(axis=-1)
    score = (nl * gl + nr * gr) / m
    valid = (xs[:-1] < xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
    score = np.where(valid, score, _INF)
    flat = score.T.ravel()
    k = int(np.argmin(flat))
    best = float(flat[k])
    if not np.isfinite(best):
        return -1, _NAN, _INF
    feat, pos = divmod(k, m - 1)
    v1 = float(xs[pos, feat])
    v2 = float(xs[pos + 1, feat])
    thr = 0.5 * (v1 + v2)
    if thr >= v2:  # midpoint can round up to v2 for adjacent floats
        thr = v1
    return int(feat), thr, best


def best_sse_split(x, r, min_leaf=1):
    """Best (feature, threshold) by summed squared error of a residual vector.

    Same candidate set and tie rules as best_gini_split.
    """
    m, d = x.shape
    if m < 2 or m < 2 * min_leaf:
        return -1, _NAN, _INF
    order = np.argsort(x, axis=0, kind="stable")
    xs = np.take_along_axis(x, order, axis=0)
    rs = r[order]
    c1 = np.cumsum(rs, axis=0)
    c2 = np.cumsum(rs * rs, axis=0)
    t1 = c1[-1]
    t2 = c2[-1]
    nl = np.arange(1, m, dtype=np.float64)[:, None]
    nr = m - nl
    l1 = c1[:-1]
    l2 = c2[:-1]
    sse_l = l2 - (l1 * l1) / nl
    r1 = t1[None, :] - l1
    sse_r = (t2[None, :] - l2) - (r1 * r1) / nr
    score = sse_l + sse_r
    valid = (xs[:-1] < xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
    score = np.where(valid, score, _INF)
    flat = score.T.ravel()
    k = int(np.argmin(flat))
    best = float(flat[k])
    if not np.isfinite(best):
        return -1, _NAN, _INF
    feat, pos = divmod(k, m - 1)
    v1 = float(xs[pos, feat])
    v2 = float(xs[pos + 1, feat])
    thr = 0.5 * (v1 + v2)
    if thr >= v2:
        thr = v1
    return int(feat), thr, best


def prim_mst(d2):
    """Minimum spanning tree edges (parent, child) via Prim from vertex 0.

    Vertex selection ties and key-update ties resolve to the lowest id, so
    the edge list is a total function of the input matrix.
    """
    n = d2.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    key = d2[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    parent[0] = -1
    edges = np.empty((n - 1, 2), dtype=np.int64)
    for t in range(n - 1):
        cand = np.nonzero(~in_tree)[0]
        i = int(cand[np.argmin(key[cand])])
        edges[t, 0] = parent[i]
        edges[t, 1] = i
        in_tree[i] = True
        row = d2[i]
        upd = (~in_tree) & (row < key)
        key[upd] = row[upd]
        parent[upd] = i
    return edges


def dbscan_labels(d2, eps, min_pts):
    """Density clustering over a precomputed squared-distance matrix.

    min_pts counts the point itself; scan order and neighbor expansion are
    by ascending index; -1 marks noise.
    """
    n = d2.shape[0]
    thr = eps * eps
    nb = d2 <= thr
    core = nb.sum(axis=1) >= min_pts
    labels = np.full(n, -1, dtype=np.int64)
    cid = 0
    for i in range(n):
        if labels[i] != -1 or not core[i]:
            continue
        labels[i] = cid
        queue = [i]
        head = 0
        while head < len(queue):
            p = queue[head]
            head += 1
            for q in np.nonzero(nb[p])[0]:
                q = int(q)
                if labels[q] == -1:
                    labels[q] = cid
                    if core[q]:
                        queue.append(q)
        cid += 1
    return labels
