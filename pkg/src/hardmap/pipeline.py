"""End-to-end orchestration: config -> analysis -> on-disk bundle.

The bundle is the tool's only output contract: seven files, fixed names,
stable bytes for a fixed (dataset, config, seed). Every table shares the
instance_id key so the explorer can join them client-side.

    manifest.json     tool version, config echo, run facts
    coordinates.csv   instance_id,z1,z2
    metadata.csv      measures, per-algorithm log-loss, hardness, label
    raw_records.csv   the original table cells, verbatim
    footprints.json   per-owner polygons and metrics
    model.json        projection matrices and scaling stats
    ranking.json      per-algorithm and aggregated measure rankings
"""

import csv
import json
import os
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .dataset import IngestConfig, build_distance_index, load_dataset, stratified_kfold
from .footprints import (
    EASINESS_THRESHOLD,
    TAU_GOOD,
    FootprintConfig,
    compute_footprints,
    performance_labelings,
)
from .learners import PerformanceMatrix, default_pool, evaluate_pool, instance_hardness
from .measures import MEASURE_NAMES, MeasureConfig, compute_hardness_matrix
from .projection import Embedding, embed_training, fit_projection, fit_rotation
from .selection import rank_and_aggregate, select_and_standardize

BUNDLE_FILES = (
    "manifest.json",
    "coordinates.csv",
    "metadata.csv",
    "raw_records.csv",
    "footprints.json",
    "model.json",
    "ranking.json",
)

POOL_NAMES = ("knn", "gaussian_nb", "logreg", "linear_svm",
              "cart", "random_forest", "gboost")


class PipelineError(RuntimeError):
    """A pipeline stage failed; the message names the stage."""


class BundleValidationError(ValueError):
    """A bundle directory does not satisfy the bundle contract."""


@dataclass
class RunConfig:
    """Everything a run needs; serializable to/from the JSON config file."""

    dataset: str
    target: str
    output_dir: str
    delimiter: str = ","
    seed: int = 0
    folds: int = 5
    kdn_k: int = 5
    keep_measures: int = 8
    restarts: int = 10
    tau_good: float = TAU_GOOD
    easiness_threshold: float = EASINESS_THRESHOLD
    purity_floor: float = 0.55
    pool: tuple = POOL_NAMES
    missing_policy: str = "reject"
    numeric_columns: tuple = ()
    categorical_columns: tuple = ()

    def __post_init__(self):
        self.pool = tuple(self.pool)
        self.numeric_columns = tuple(self.numeric_columns)
        self.categorical_columns = tuple(self.categorical_columns)
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        for name in ("tau_good", "easiness_threshold", "purity_floor"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        unknown = set(self.pool) - set(POOL_NAMES)
        if unknown:
            raise ValueError(f"unknown pool learners: {sorted(unknown)}")
        if not self.pool:
            raise ValueError("pool must not be empty")

    @classmethod
    def from_json(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = {"dataset", "target", "output_dir"} - set(raw)
        if missing:
            raise ValueError(f"missing required config keys: {sorted(missing)}")
        return cls(**raw)

    def echo(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


@dataclass
class AnalysisBundle:
    """Everything write_bundle persists, still in memory."""

    manifest: dict
    instance_ids: np.ndarray
    coords: np.ndarray
    hardness: object
    perf: object
    ih: object
    labels: list           # class name per instance
    raw_columns: list
    raw_records: list
    footprints: list
    model: object
    ranking: object

    @property
    def n_instances(self):
        return int(self.coords.shape[0])


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        raise PipelineError(f"stage {name!r} failed: {exc}") from exc


def run_pipeline(config, dataset=None):
    """Run the full analysis and return the in-memory bundle.

    A preloaded Dataset may be passed to skip the file-reading stage (the
    config's dataset path is then only echoed in the manifest).
    """
    if dataset is None:
        ingest = IngestConfig(
            target=config.target,
            delimiter=config.delimiter,
            numeric_columns=config.numeric_columns,
            categorical_columns=config.categorical_columns,
            missing_policy=config.missing_policy,
        )
        dataset = _stage("load", load_dataset, config.dataset, ingest)

    distance_index = _stage("load", build_distance_index, dataset)
    hardness = _stage(
        "hardness", compute_hardness_matrix, dataset,
        MeasureConfig(kdn_k=config.kdn_k, seed=config.seed), distance_index,
    )

    def _pool_stage():
        folds = stratified_kfold(dataset, config.folds, config.seed)
        pool = [lr for lr in default_pool(config.seed) if lr.name in config.pool]
        prob, perf = evaluate_pool(dataset, folds, pool, config.seed)
        return prob, perf, instance_hardness(prob)

    prob, perf, ih = _stage("pool", _pool_stage)

    def _selection_stage():
        ranking = rank_and_aggregate(hardness, perf)
        meta = select_and_standardize(hardness, perf, ranking, config.keep_measures)
        return ranking, meta

    ranking, meta = _stage("selection", _selection_stage)

    model = _stage("projection", fit_projection, meta, config.restarts, config.seed)

    def _rotation_stage():
        pre = Embedding(meta.feature_block @ model.A.T)
        fit_rotation(model, pre, ih)
        return embed_training(model, meta)

    embedding = _stage("rotation", _rotation_stage)

    def _footprint_stage():
        labelings = performance_labelings(
            perf, ih, tau_good=config.tau_good, easiness=config.easiness_threshold
        )
        fp_config = FootprintConfig(purity_floor=config.purity_floor)
        return compute_footprints(embedding, labelings, fp_config)

    fps = _stage("footprints", _footprint_stage)

    manifest = {
        "tool": "hardmap",
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "seed": config.seed,
        "config": config.echo(),
        "n_instances": dataset.n_instances,
        "n_classes": dataset.n_classes,
        "class_names": list(dataset.class_names),
        "algorithms": list(perf.algorithm_names),
        "selected_measures": list(meta.selected_measures),
        "measure_names": list(MEASURE_NAMES),
    }
    return AnalysisBundle(
        manifest=manifest,
        instance_ids=dataset.instance_ids,
        coords=embedding.coords,
        hardness=hardness,
        perf=perf,
        ih=ih,
        labels=[dataset.class_names[c] for c in dataset.labels],
        raw_columns=list(dataset.raw_columns),
        raw_records=dataset.raw_records,
        footprints=fps,
        model=model,
        ranking=ranking,
    )


def _fmt(v):
    return repr(float(v))


def _json_bytes(obj):
    return (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode("utf-8")


def _model_payload(model):
    return {
        "A": model.A.tolist(),
        "B": model.B.tolist(),
        "C": model.C.tolist(),
        "R": model.R.tolist(),
        "selected_measures": list(model.selected_measures),
        "scaling_stats": {
            block: {name: list(stats) for name, stats in entries.items()}
            for block, entries in model.scaling_stats.items()
        },
        "objective": model.objective,
        "restarts_log": list(model.restarts_log),
    }


def _footprint_payload(bundle):
    cfg = bundle.manifest["config"]
    return {
        "tau_good": cfg["tau_good"],
        "easiness_threshold": cfg["easiness_threshold"],
        "purity_floor": cfg["purity_floor"],
        "owners": [
            {
                "owner": fp.owner,
                "polygons": [np.asarray(p).tolist() for p in fp.polygons],
                "area": fp.area,
                "density": fp.density,
                "purity": fp.purity,
                "n_inside": fp.n_inside,
                "n_good_inside": fp.n_good_inside,
            }
            for fp in bundle.footprints
        ],
    }


def _ranking_payload(ranking):
    return {
        "per_algorithm": {
            algo: [[name, score] for name, score in scored]
            for algo, scored in ranking.per_algorithm.items()
        },
        "aggregated": [[name, rank] for name, rank in ranking.aggregated],
    }


def write_bundle(bundle, out_dir):
    """Write the seven bundle files; on failure remove whatever was written."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    try:
        path = os.path.join(out_dir, "manifest.json")
        with open(path, "wb") as fh:
            fh.write(_json_bytes(bundle.manifest))
        written.append(path)

        path = os.path.join(out_dir, "coordinates.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["instance_id", "z1", "z2"])
            for i, (z1, z2) in zip(bundle.instance_ids, bundle.coords):
                writer.writerow([int(i), _fmt(z1), _fmt(z2)])
        written.append(path)

        path = os.path.join(out_dir, "metadata.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            algo_cols = [f"algo_{a}_logloss" for a in bundle.perf.algorithm_names]
            writer.writerow(
                ["instance_id", *bundle.hardness.measure_names, *algo_cols,
                 "instance_hardness", "label"]
            )
            for r in range(bundle.n_instances):
                writer.writerow([
                    int(bundle.instance_ids[r]),
                    *[_fmt(v) for v in bundle.hardness.values[r]],
                    *[_fmt(v) for v in bundle.perf.values[r]],
                    _fmt(bundle.ih.ih[r]),
                    bundle.labels[r],
                ])
        written.append(path)

        path = os.path.join(out_dir, "raw_records.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["instance_id", *bundle.raw_columns])
            for i, row in zip(bundle.instance_ids, bundle.raw_records):
                writer.writerow([int(i), *row])
        written.append(path)

        for name, payload in (
            ("footprints.json", _footprint_payload(bundle)),
            ("model.json", _model_payload(bundle.model)),
            ("ranking.json", _ranking_payload(bundle.ranking)),
        ):
            path = os.path.join(out_dir, name)
            with open(path, "wb") as fh:
                fh.write(_json_bytes(payload))
            written.append(path)
    except Exception:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise
    return [os.path.join(out_dir, name) for name in BUNDLE_FILES]


def _read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise BundleValidationError(f"{os.path.basename(path)}: empty file")
    return rows[0], rows[1:]


def _owner_column(owner):
    return "instance_hardness" if owner == "instance_easiness" else f"algo_{owner}_logloss"


def validate_bundle(bundle_dir):
    """Check the seven-file bundle contract; raises BundleValidationError.

    Returns a small summary dict (n_instances, algorithms, version) on
    success.
    """
    for name in BUNDLE_FILES:
        if not os.path.isfile(os.path.join(bundle_dir, name)):
            raise BundleValidationError(f"missing bundle file: {name}")

    def _load_json(name):
        with open(os.path.join(bundle_dir, name), "r", encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise BundleValidationError(f"{name}: invalid JSON ({exc})") from exc

    manifest = _load_json("manifest.json")
    for key in ("tool", "version", "seed", "config", "n_instances", "algorithms"):
        if key not in manifest:
            raise BundleValidationError(f"manifest.json: missing key {key!r}")
    n = int(manifest["n_instances"])

    header, rows = _read_csv(os.path.join(bundle_dir, "coordinates.csv"))
    if header != ["instance_id", "z1", "z2"]:
        raise BundleValidationError("coordinates.csv: wrong header")
    if len(rows) != n:
        raise BundleValidationError(f"coordinates.csv: expected {n} rows, found {len(rows)}")
    try:
        ids = [int(r[0]) for r in rows]
        for r in rows:
            float(r[1]), float(r[2])
    except (ValueError, IndexError) as exc:
        raise BundleValidationError(f"coordinates.csv: bad row ({exc})") from exc
    if len(set(ids)) != n:
        raise BundleValidationError("coordinates.csv: duplicate instance ids")

    meta_header, rows = _read_csv(os.path.join(bundle_dir, "metadata.csv"))
    if not meta_header or meta_header[0] != "instance_id":
        raise BundleValidationError("metadata.csv: instance_id must be the first column")
    missing = [m for m in MEASURE_NAMES if m not in meta_header]
    if missing:
        raise BundleValidationError(f"metadata.csv: missing measure columns {missing}")
    for col in ("instance_hardness", "label"):
        if col not in meta_header:
            raise BundleValidationError(f"metadata.csv: missing column {col!r}")
    for algo in manifest["algorithms"]:
        if f"algo_{algo}_logloss" not in meta_header:
            raise BundleValidationError(f"metadata.csv: missing column for algorithm {algo!r}")
    if [int(r[0]) for r in rows] != ids:
        raise BundleValidationError("metadata.csv: instance ids disagree with coordinates.csv")

    header, rows = _read_csv(os.path.join(bundle_dir, "raw_records.csv"))
    if not header or header[0] != "instance_id":
        raise BundleValidationError("raw_records.csv: instance_id must be the first column")
    if [int(r[0]) for r in rows] != ids:
        raise BundleValidationError("raw_records.csv: instance ids disagree with coordinates.csv")

    fps = _load_json("footprints.json")
    if "owners" not in fps:
        raise BundleValidationError("footprints.json: missing 'owners'")
    for item in fps["owners"]:
        owner = item.get("owner", "")
        if _owner_column(owner) not in meta_header:
            raise BundleValidationError(
                f"footprints.json: owner {owner!r} has no metadata column"
            )
        for poly in item.get("polygons", []):
            if len(poly) < 3:
                raise BundleValidationError(
                    f"footprints.json: degenerate polygon for owner {owner!r}"
                )
        if not 0.0 <= item.get("purity", -1.0) <= 1.0:
            raise BundleValidationError(f"footprints.json: purity out of range for {owner!r}")

    model = _load_json("model.json")
    for key in ("A", "B", "C", "R", "selected_measures", "scaling_stats", "objective"):
        if key not in model:
            raise BundleValidationError(f"model.json: missing key {key!r}")
    a = np.asarray(model["A"], dtype=np.float64)
    r = np.asarray(model["R"], dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != 2:
        raise BundleValidationError("model.json: A must be 2 x m")
    if r.shape != (2, 2) or np.abs(r @ r.T - np.eye(2)).max() > 1e-9 \
            or abs(np.linalg.det(r) - 1.0) > 1e-9:
        raise BundleValidationError("model.json: R is not a proper rotation")
    if len(model["selected_measures"]) != a.shape[1]:
        raise BundleValidationError("model.json: selected_measures does not match A's width")
    for name in model["selected_measures"]:
        if name not in meta_header:
            raise BundleValidationError(f"model.json: selected measure {name!r} not in metadata")

    ranking = _load_json("ranking.json")
    if "per_algorithm" not in ranking or "aggregated" not in ranking:
        raise BundleValidationError("ranking.json: missing keys")
    expected = sorted(MEASURE_NAMES)
    if sorted(name for name, _ in ranking["aggregated"]) != expected:
        raise BundleValidationError("ranking.json: aggregated is not a permutation of measures")
    for algo, scored in ranking["per_algorithm"].items():
        if sorted(name for name, _ in scored) != expected:
            raise BundleValidationError(
                f"ranking.json: ranking for {algo!r} is not a permutation of measures"
            )

    return {
        "n_instances": n,
        "algorithms": list(manifest["algorithms"]),
        "version": manifest.get("version"),
    }
