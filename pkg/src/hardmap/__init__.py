"""hardmap: hardness embedding and algorithm footprints for one dataset.

Builds per-instance hardness meta-features, evaluates a pool of classifiers
with nested cross-validation, projects the joined metadata into a 2-D space
with a linear hardness trend, and delineates footprints of good performance.
"""

__version__ = "0.1.0"

from .dataset import Dataset, FoldAssignment, DistanceIndex, load_dataset, stratified_kfold, build_distance_index
from .measures import HardnessMatrix, MEASURE_NAMES, compute_hardness_matrix
from .learners import default_pool, evaluate_pool, instance_hardness
from .selection import spearman_correlation, rank_and_aggregate, select_and_standardize
from .projection import fit_projection, fit_rotation, project
from .footprints import compute_footprints
from .pipeline import RunConfig, run_pipeline, write_bundle, validate_bundle

__all__ = [
    "__version__",
    "Dataset",
    "FoldAssignment",
    "DistanceIndex",
    "load_dataset",
    "stratified_kfold",
    "build_distance_index",
    "HardnessMatrix",
    "MEASURE_NAMES",
    "compute_hardness_matrix",
    "default_pool",
    "evaluate_pool",
    "instance_hardness",
    "spearman_correlation",
    "rank_and_aggregate",
    "select_and_standardize",
    "fit_projection",
    "fit_rotation",
    "project",
    "compute_footprints",
    "RunConfig",
    "run_pipeline",
    "write_bundle",
    "validate_bundle",
]
