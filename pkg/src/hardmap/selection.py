"""Measure ranking against pool performance, aggregation, and standardization.

Each algorithm votes with a ranking of the 13 measures by absolute Spearman
correlation against its per-instance log-loss; votes are merged by mean rank
(Borda). The top-m measures and every performance column are then z-scored
into the metadata the projection consumes.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata


@dataclass
class FeatureRanking:
    """Per-algorithm orders (name, |rho|) and the aggregated (name, mean rank)."""

    per_algorithm: dict
    aggregated: list

    def ordered_names(self):
        return [name for name, _ in self.aggregated]


@dataclass
class MetaDataset:
    """Standardized measure and performance blocks ready for projection."""

    selected_measures: tuple
    feature_block: np.ndarray
    performance_block: np.ndarray
    scaling_stats: dict
    algorithm_names: tuple
    constant_columns: tuple = field(default=())

    @property
    def n_instances(self):
        return int(self.feature_block.shape[0])


def spearman_correlation(a, b):
    """Spearman rank correlation with average ranks; 0 for constant input."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.shape[0] < 3:
        raise ValueError("need two equal-length vectors of at least 3 values")
    ra = rankdata(a)
    rb = rankdata(b)
    sa = ra.std()
    sb = rb.std()
    if sa == 0.0 or sb == 0.0:
        return 0.0
    cov = float(((ra - ra.mean()) * (rb - rb.mean())).mean())
    return cov / (sa * sb)


def rank_and_aggregate(hardness, perf):
    """Rank measures per algorithm by |Spearman| and Borda-merge the orders.

    Ties (both within an algorithm and in mean rank) fall back to measure
    name order, so the result is a total order.
    """
    if hardness.values.shape[0] != perf.values.shape[0]:
        raise ValueError("hardness and performance row counts differ")
    names = hardness.measure_names
    per_algorithm = {}
    rank_of = {name: [] for name in names}
    for j, algo in enumerate(perf.algorithm_names):
        loss = perf.values[:, j]
        scored = [
            (name, abs(spearman_correlation(hardness.column(name), loss)))
            for name in names
        ]
        scored.sort(key=lambda t: (-t[1], t[0]))
        per_algorithm[algo] = scored
        for pos, (name, _) in enumerate(scored, start=1):
            rank_of[name].append(pos)
    aggregated = [(name, float(np.mean(rank_of[name]))) for name in names]
    aggregated.sort(key=lambda t: (t[1], t[0]))
    return FeatureRanking(per_algorithm, aggregated)


def _zscore(column):
    mean = float(column.mean())
    sd = float(column.std())
    if sd == 0.0:
        return np.zeros_like(column), mean, sd, True
    return (column - mean) / sd, mean, sd, False


def select_and_standardize(hardness, perf, ranking, m=8):
    """Keep the top-m aggregated measures and z-score both blocks.

    Constant columns standardize to all zeros and are listed in
    constant_columns rather than raising.
    """
    total = len(hardness.measure_names)
    if not 2 <= m <= total:
        raise ValueError(f"m must be in [2, {total}], got {m}")
    selected = tuple(ranking.ordered_names()[:m])

    stats = {"measures": {}, "performance": {}}
    constants = []
    feat_cols = []
    for name in selected:
        col, mean, sd, const = _zscore(hardness.column(name))
        feat_cols.append(col)
        stats["measures"][name] = (mean, sd)
        if const:
            constants.append(name)
    perf_cols = []
    for j, algo in enumerate(perf.algorithm_names):
        col, mean, sd, const = _zscore(perf.values[:, j])
        perf_cols.append(col)
        stats["performance"][algo] = (mean, sd)
        if const:
            constants.append(f"algo_{algo}_logloss")

    return MetaDataset(
        selected_measures=selected,
        feature_block=np.column_stack(feat_cols),
        performance_block=np.column_stack(perf_cols),
        scaling_stats=stats,
        algorithm_names=tuple(perf.algorithm_names),
        constant_columns=tuple(constants),
    )
