"""Shared fixtures and independent oracle helpers for the test suite.

Oracles here deliberately use different algorithms from the package code
(Kruskal instead of Prim, exhaustive scans instead of vectorized kernels)
so agreement is meaningful.
"""

import numpy as np
import pytest

from hardmap.dataset import Dataset


# ---------------------------------------------------------------------------
# independent oracles


def oracle_knn(x, i, k):
    """k nearest neighbor ids of row i by (distance, id), pure python."""
    scored = []
    for j in range(x.shape[0]):
        if j == i:
            continue
        d = float(np.sqrt(((x[i] - x[j]) ** 2).sum()))
        scored.append((d, j))
    scored.sort()
    return [j for _, j in scored[:k]]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def oracle_mst_weight(dist):
    """Total MST weight via Kruskal (independent of the package's Prim)."""
    n = dist.shape[0]
    edges = sorted(
        (float(dist[i, j]), i, j) for i in range(n) for j in range(i + 1, n)
    )
    uf = _UnionFind(n)
    total = 0.0
    for w, i, j in edges:
        if uf.union(i, j):
            total += w
    return total


def oracle_mst_edges(dist):
    """Kruskal MST edge set as frozenset of frozensets."""
    n = dist.shape[0]
    edges = sorted(
        (float(dist[i, j]), i, j) for i in range(n) for j in range(i + 1, n)
    )
    uf = _UnionFind(n)
    out = set()
    for _, i, j in edges:
        if uf.union(i, j):
            out.add(frozenset((i, j)))
    return out


def oracle_gini_split(x, y, n_classes, min_leaf=1):
    """Exhaustive best split by weighted child Gini, python loops.

    Same candidate set (midpoints between consecutive distinct sorted
    values) and the same tie rules (lowest feature, lowest threshold).
    """
    m, d = x.shape
    best = (-1, float("nan"), float("inf"))
    for feat in range(d):
        values = sorted(set(float(v) for v in x[:, feat]))
        for v1, v2 in zip(values, values[1:]):
            thr = (v1 + v2) / 2.0
            if thr >= v2:
                thr = v1
            left = [i for i in range(m) if x[i, feat] <= thr]
            right = [i for i in range(m) if x[i, feat] > thr]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue

            def gini(idx):
                if not idx:
                    return 0.0
                p = np.bincount(y[idx], minlength=n_classes) / len(idx)
                return 1.0 - float((p * p).sum())

            score = (len(left) * gini(left) + len(right) * gini(right)) / m
            if score < best[2]:
                best = (feat, thr, score)
    return best


def oracle_point_in_convex(point, polygon):
    """Half-plane containment for CCW convex polygons, boundary inclusive."""
    k = len(polygon)
    for i in range(k):
        ax, ay = polygon[i]
        bx, by = polygon[(i + 1) % k]
        cross = (bx - ax) * (point[1] - ay) - (by - ay) * (point[0] - ax)
        if cross < 0.0:
            return False
    return True


# ---------------------------------------------------------------------------
# fixtures


@pytest.fixture
def small_blobs():
    from hardmap.synth import blob_dataset

    return blob_dataset([(0.2, 0.2), (0.8, 0.8)], n_per_class=15, seed=1)


@pytest.fixture
def line_dataset():
    """12 points on a line, labels split by side; hand-checkable geometry."""
    x = np.linspace(0.0, 1.0, 12).reshape(-1, 1)
    y = np.array([0] * 6 + [1] * 6)
    return Dataset.from_arrays(x, y)
