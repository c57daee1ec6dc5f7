"""Dataset ingestion, stratified folds, and the shared distance machinery.

A dataset is a delimited text table with a header row and one target column.
Numeric columns are min-max scaled to [0, 1]; categorical columns are one-hot
encoded (categories in sorted order, values in {0, 1}). Original cell values
are retained verbatim for inspection. Instances are identified by their row
order, 0..n-1, after rows with a missing target are dropped.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .rng import spawn_rng

MISSING_TOKENS = frozenset({"", "na", "nan", "null", "none", "?"})

DEFAULT_MAX_INSTANCES = 20_000  # n x n distance matrices are held in memory


class DatasetError(ValueError):
    """Raised when a table cannot be turned into a valid dataset."""


@dataclass
class IngestConfig:
    """Options controlling how a delimited file becomes a Dataset.

    numeric_columns / categorical_columns override per-column type detection;
    a column is otherwise numeric when every non-missing cell parses as a
    float. missing_policy is "reject" (default) or "impute" (median for
    numeric, mode for categorical, mode ties broken by sorted order).
    """

    target: str
    delimiter: str = ","
    numeric_columns: tuple = ()
    categorical_columns: tuple = ()
    missing_policy: str = "reject"
    max_instances: int = DEFAULT_MAX_INSTANCES


@dataclass
class Dataset:
    """A preprocessed classification dataset.

    features holds the scaled/encoded matrix; labels are class indices into
    class_names; raw_records keeps the original string cells (target
    included) in raw_columns order.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: list
    class_names: list
    raw_records: list
    raw_columns: list
    instance_ids: np.ndarray = field(default=None)

    def __post_init__(self):
        self.features = np.ascontiguousarray(self.features, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        n = self.features.shape[0]
        if self.instance_ids is None:
            self.instance_ids = np.arange(n, dtype=np.int64)
        if n < 10:
            raise DatasetError(f"need at least 10 instances, got {n}")
        if len(self.class_names) < 2:
            raise DatasetError("fewer than 2 classes")
        counts = np.bincount(self.labels, minlength=len(self.class_names))
        if counts.min() < 2:
            small = self.class_names[int(np.argmin(counts))]
            raise DatasetError(f"class {small!r} has fewer than 2 instances")
        if np.isnan(self.features).any():
            raise DatasetError("features contain missing values after preprocessing")
        if self.features.min() < 0.0 or self.features.max() > 1.0:
            raise DatasetError("preprocessed features must lie in [0, 1]")
        if len(self.raw_records) != n:
            raise DatasetError("raw_records length does not match feature rows")

    @property
    def n_instances(self):
        return int(self.features.shape[0])

    @property
    def n_features(self):
        return int(self.features.shape[1])

    @property
    def n_classes(self):
        return len(self.class_names)

    def class_counts(self):
        return np.bincount(self.labels, minlength=self.n_classes)

    @classmethod
    def from_arrays(cls, features, labels, feature_names=None, class_names=None, raw_records=None):
        """Build a Dataset from in-memory arrays already scaled to [0, 1].

        Labels may be any hashable values; they are mapped to sorted class
        names. Raw records default to the stringified feature row plus label.
        """
        features = np.asarray(features, dtype=np.float64)
        labels = np.asarray(labels)
        uniq = sorted(set(labels.tolist()), key=str)
        class_names = [str(u) for u in uniq] if class_names is None else list(class_names)
        lookup = {u: i for i, u in enumerate(uniq)}
        y = np.array([lookup[v] for v in labels.tolist()], dtype=np.int64)
        if feature_names is None:
            feature_names = [f"f{j}" for j in range(features.shape[1])]
        if raw_records is None:
            raw_records = [
                [repr(float(v)) for v in row] + [class_names[y[i]]]
                for i, row in enumerate(features)
            ]
            raw_columns = list(feature_names) + ["target"]
        else:
            raw_columns = [f"c{j}" for j in range(len(raw_records[0]))]
        return cls(features, y, list(feature_names), class_names, raw_records, raw_columns)


def _is_missing(cell):
    return cell.strip().lower() in MISSING_TOKENS


def _parse_float(cell):
    try:
        return float(cell)
    except ValueError:
        return None


def load_dataset(path, config):
    """Read a delimited text table into a Dataset.

    Rows whose target cell is missing are dropped. Missing feature cells are
    an error under the default policy and imputed under "impute". Numeric
    columns are min-max scaled (constant columns map to 0.0); categorical
    columns are one-hot encoded as <name>=<category> features.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh, delimiter=config.delimiter)
            rows = list(reader)
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DatasetError(f"{path} is empty")
    header = rows[0]
    if config.target not in header:
        raise DatasetError(f"target column {config.target!r} not in header")
    t_idx = header.index(config.target)
    width = len(header)

    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != width:
            raise DatasetError(f"row {lineno} has {len(row)} cells, expected {width}")
        if _is_missing(row[t_idx]):
            continue
        records.append(row)
    n = len(records)
    if n > config.max_instances:
        raise DatasetError(f"{n} instances exceeds the configured limit {config.max_instances}")

    feat_cols = [j for j in range(width) if j != t_idx]
    declared_num = set(config.numeric_columns)
    declared_cat = set(config.categorical_columns)
    overlap = declared_num & declared_cat
    if overlap:
        raise DatasetError(f"columns declared both numeric and categorical: {sorted(overlap)}")

    col_kind = {}
    for j in feat_cols:
        name = header[j]
        cells = [r[j] for r in records]
        present = [c for c in cells if not _is_missing(c)]
        if name in declared_cat:
            col_kind[j] = "cat"
        elif name in declared_num:
            for c in present:
                if _parse_float(c) is None:
                    raise DatasetError(f"non-numeric value {c!r} in numeric column {name!r}")
            col_kind[j] = "num"
        else:
            col_kind[j] = "num" if present and all(_parse_float(c) is not None for c in present) else "cat"

    blocks = []
    feature_names = []
    for j in feat_cols:
        name = header[j]
        cells = [r[j] for r in records]
        missing = [i for i, c in enumerate(cells) if _is_missing(c)]
        if missing and config.missing_policy != "impute":
            raise DatasetError(
                f"missing value in column {name!r} (first at data row {missing[0]}); "
                "no imputation policy configured"
            )
        if col_kind[j] == "num":
            vals = np.array([_parse_float(c) if not _is_missing(c) else np.nan for c in cells])
            if missing:
                present = vals[~np.isnan(vals)]
                if present.size == 0:
                    raise DatasetError(f"column {name!r} has no usable values")
                vals[np.isnan(vals)] = float(np.median(present))
            lo, hi = float(vals.min()), float(vals.max())
            scaled = np.zeros(n) if hi == lo else (vals - lo) / (hi - lo)
            blocks.append(scaled.reshape(-1, 1))
            feature_names.append(name)
        else:
            filled = list(cells)
            if missing:
                present = [c for c in cells if not _is_missing(c)]
                if not present:
                    raise DatasetError(f"column {name!r} has no usable values")
                counts = {}
                for c in present:
                    counts[c] = counts.get(c, 0) + 1
                top = max(counts.values())
                mode = sorted(c for c, k in counts.items() if k == top)[0]
                filled = [mode if _is_missing(c) else c for c in cells]
            cats = sorted(set(filled))
            onehot = np.zeros((n, len(cats)))
            index = {c: k for k, c in enumerate(cats)}
            for i, c in enumerate(filled):
                onehot[i, index[c]] = 1.0
            blocks.append(onehot)
            feature_names.extend(f"{name}={c}" for c in cats)

    features = np.hstack(blocks) if blocks else np.zeros((n, 0))
    if features.shape[1] == 0:
        raise DatasetError("no feature columns")

    targets = [r[t_idx] for r in records]
    class_names = sorted(set(targets))
    if len(class_names) < 2:
        raise DatasetError("fewer than 2 classes")
    lookup = {c: i for i, c in enumerate(class_names)}
    labels = np.array([lookup[t] for t in targets], dtype=np.int64)

    return Dataset(features, labels, feature_names, class_names, records, list(header))


@dataclass
class FoldAssignment:
    """Stratified fold membership: fold_of[i] is the test fold of instance i."""

    fold_of: np.ndarray
    k: int
    seed: int

    def test_indices(self, fold):
        return np.nonzero(self.fold_of == fold)[0]

    def train_indices(self, fold):
        return np.nonzero(self.fold_of != fold)[0]


def _deal_stratified(labels, k, rng):
    """Shuffle each class and deal round-robin; per-class fold counts differ by <= 1."""
    fold_of = np.empty(labels.shape[0], dtype=np.int64)
    offset = 0
    for cls in range(int(labels.max()) + 1):
        ids = np.nonzero(labels == cls)[0]
        perm = ids[rng.permutation(ids.shape[0])]
        for j, idx in enumerate(perm):
            fold_of[idx] = (j + offset) % k
        offset = (offset + perm.shape[0]) % k
    return fold_of


def stratified_kfold(dataset, k=5, seed=0):
    """Deterministic stratified k-fold assignment.

    Every class must have at least k instances; smaller classes are an error
    rather than being silently merged across folds.
    """
    if k < 2:
        raise DatasetError(f"fold count must be >= 2, got {k}")
    counts = dataset.class_counts()
    if counts.min() < k:
        small = dataset.class_names[int(np.argmin(counts))]
        raise DatasetError(f"class {small!r} has {int(counts.min())} instances, fewer than k={k}")
    rng = spawn_rng(seed, "stratified_kfold", k)
    return FoldAssignment(_deal_stratified(dataset.labels, k, rng), k, seed)


def lax_stratified_folds(labels, k, rng):
    """Stratified dealing without the minimum-class-size check.

    Used for inner loops where tiny classes may appear in a subset; a class
    smaller than k simply leaves some folds without it.
    """
    return _deal_stratified(np.asarray(labels, dtype=np.int64), k, rng)


class DistanceIndex:
    """Exact pairwise Euclidean distances with deterministic neighbor order.

    Neighbor lists sort by (distance, instance_id) and exclude the query
    instance itself.
    """

    def __init__(self, features):
        self.sqdist = kernels.pairwise_sqdist(features)
        self.dist = np.sqrt(self.sqdist)
        self._n = self.dist.shape[0]

    @property
    def n(self):
        return self._n

    def neighbor_order(self, i):
        """All other instances sorted by (distance to i, id)."""
        ids = np.arange(self._n)
        order = np.lexsort((ids, self.dist[i]))
        return order[order != i]

    def kneighbors(self, i, k):
        return self.neighbor_order(i)[:k]

    def knn_matrix(self, k):
        """Row r holds the k nearest neighbors of instance r."""
        out = np.empty((self._n, k), dtype=np.int64)
        for i in range(self._n):
            out[i] = self.kneighbors(i, k)
        return out


def build_distance_index(dataset):
    """Distance index over the preprocessed feature matrix."""
    return DistanceIndex(dataset.features)
