"""Footprints: regions of the embedding where a learner performs well.

For every owner (each pool algorithm, plus the instance-easiness view) the
good instances are clustered with DBSCAN, each cluster is wrapped in a
convex hull, hulls whose contents are not pure enough are dropped, and the
survivors are summarized by area, density, and purity. Areas and densities
are reported relative to the convex hull of the whole embedding so numbers
are comparable across datasets.
"""

from dataclasses import dataclass

import numpy as np
from shapely.geometry import Polygon
from shapely.ops import unary_union

from . import kernels

TAU_GOOD = float(-np.log(0.5))

EASINESS_THRESHOLD = 0.4

EASINESS_OWNER = "instance_easiness"


@dataclass
class GoodnessLabeling:
    """Which instances count as good for one owner."""

    owner: str
    good: np.ndarray
    threshold: float

    def __post_init__(self):
        self.good = np.ascontiguousarray(self.good, dtype=bool)

    @property
    def count(self):
        return int(self.good.sum())


def label_good(values, threshold, owner, strict=False):
    """Boolean goodness labeling: value <= threshold, or < when strict."""
    values = np.asarray(values, dtype=np.float64)
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    good = values < threshold if strict else values <= threshold
    return GoodnessLabeling(owner, good, float(threshold))


def performance_labelings(perf, ih, tau_good=TAU_GOOD, easiness=EASINESS_THRESHOLD):
    """One labeling per algorithm (log-loss <= tau) plus the easiness view (ih < 0.4)."""
    out = [
        label_good(perf.values[:, j], tau_good, algo)
        for j, algo in enumerate(perf.algorithm_names)
    ]
    out.append(label_good(ih.ih, easiness, EASINESS_OWNER, strict=True))
    return out


@dataclass
class FootprintConfig:
    eps: float = None  # None -> median distance to the 5th nearest good neighbor
    min_pts: int = 5
    purity_floor: float = 0.55


@dataclass
class Footprint:
    """Kept hulls for one owner plus their pooled metrics."""

    owner: str
    polygons: list
    area: float         # union area / global hull area
    density: float      # inside-count density relative to the global density
    purity: float       # good inside / all inside, pooled over kept hulls
    n_inside: int
    n_good_inside: int


def default_eps(coords, min_pts=5):
    """Median distance to the (min_pts)th nearest neighbor among the points.

    With g points the neighbor order caps at g - 1; callers guarantee g >= 2.
    """
    g = coords.shape[0]
    k = min(min_pts, g - 1)
    d2 = kernels.pairwise_sqdist(coords)
    d = np.sqrt(d2)
    kth = np.sort(d, axis=1)[:, k]  # column 0 is the point itself
    return float(np.median(kth))


def cluster_good(coords, eps=None, min_pts=5):
    """DBSCAN assignments for the good-instance coordinates; -1 is noise."""
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    g = coords.shape[0]
    if g < min_pts:
        return np.full(g, -1, dtype=np.int64)
    if eps is None:
        eps = default_eps(coords, min_pts)
    return kernels.dbscan_labels(kernels.pairwise_sqdist(coords), float(eps), int(min_pts))


def convex_hull(points):
    """Counterclockwise convex hull (monotone chain); collinear vertices dropped.

    Returns an empty (0, 2) array when fewer than 3 non-collinear distinct
    points exist.
    """
    pts = np.asarray(points, dtype=np.float64)
    uniq = sorted(set(map(tuple, pts.tolist())))
    if len(uniq) < 3:
        return np.empty((0, 2))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(uniq):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return np.empty((0, 2))
    return np.array(hull)


def polygon_area(polygon):
    """Shoelace area; positive for counterclockwise vertex order."""
    p = np.asarray(polygon, dtype=np.float64)
    if p.shape[0] < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def point_in_polygon(point, polygon):
    """Ray-casting containment with the boundary counted as inside."""
    px, py = float(point[0]), float(point[1])
    poly = np.asarray(polygon, dtype=np.float64)
    k = poly.shape[0]
    inside = False
    for i in range(k):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % k]
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        if (cross == 0.0
                and min(ax, bx) <= px <= max(ax, bx)
                and min(ay, by) <= py <= max(ay, by)):
            return True
        if (ay > py) != (by > py):
            x_hit = ax + (py - ay) * (bx - ax) / (by - ay)
            if x_hit > px:
                inside = not inside
    return inside


def _union_area(polygons):
    if not polygons:
        return 0.0
    return float(unary_union([Polygon(p.tolist()) for p in polygons]).area)


def compute_footprints(embedding, labelings, config=None):
    """Cluster, hull, prune, and measure every owner's good region."""
    config = config or FootprintConfig()
    coords = embedding.coords
    n = coords.shape[0]
    global_hull = convex_hull(coords)
    global_area = polygon_area(global_hull)

    out = []
    for labeling in labelings:
        good_ids = np.nonzero(labeling.good)[0]
        kept = []
        if global_area > 0.0 and good_ids.shape[0] >= config.min_pts:
            assign = cluster_good(coords[good_ids], config.eps, config.min_pts)
            for cid in np.unique(assign[assign >= 0]):
                hull = convex_hull(coords[good_ids[assign == cid]])
                if hull.shape[0] < 3:
                    continue
                member = np.array([point_in_polygon(coords[i], hull) for i in range(n)])
                n_in = int(member.sum())
                n_good = int((member & labeling.good).sum())
                if n_in > 0 and n_good / n_in >= config.purity_floor:
                    kept.append(hull)

        if kept:
            member = np.zeros(n, dtype=bool)
            for hull in kept:
                member |= np.array([point_in_polygon(coords[i], hull) for i in range(n)])
            n_in = int(member.sum())
            n_good = int((member & labeling.good).sum())
            raw = _union_area(kept)
            area = raw / global_area
            density = (n_in / raw) / (n / global_area) if raw > 0.0 else 0.0
            purity = n_good / n_in if n_in else 0.0
        else:
            n_in = n_good = 0
            area = density = purity = 0.0

        out.append(Footprint(labeling.owner, kept, area, density, purity, n_in, n_good))
    return out
