"""Synthetic dataset generators for tests, benchmarks, and the demo CLI."""

import csv

import numpy as np

from .dataset import Dataset
from .rng import spawn_rng


def two_gaussians(n=200, gap=0.4, spread=0.12, seed=0):
    """Two spherical Gaussian classes on the unit-square diagonal.

    The class centers sit `gap` apart along the diagonal around (0.5, 0.5);
    coordinates are clipped to [0, 1] so the geometry is preserved.
    """
    rng = spawn_rng(seed, "synth", "two_gaussians")
    half = n // 2
    shift = gap / (2.0 * np.sqrt(2.0))
    c0 = np.array([0.5 - shift, 0.5 - shift])
    c1 = np.array([0.5 + shift, 0.5 + shift])
    x = np.vstack([
        rng.normal(c0, spread, size=(half, 2)),
        rng.normal(c1, spread, size=(n - half, 2)),
    ])
    y = np.array([0] * half + [1] * (n - half))
    return Dataset.from_arrays(np.clip(x, 0.0, 1.0), y, feature_names=["x1", "x2"])


def blob_dataset(centers, n_per_class=20, spread=0.02, seed=0):
    """Tight, well-separated class blobs at the given [0,1]^d centers."""
    rng = spawn_rng(seed, "synth", "blobs")
    xs, ys = [], []
    for cls, center in enumerate(centers):
        xs.append(rng.normal(np.asarray(center, dtype=np.float64), spread,
                             size=(n_per_class, len(center))))
        ys.extend([cls] * n_per_class)
    x = np.clip(np.vstack(xs), 0.0, 1.0)
    return Dataset.from_arrays(x, np.array(ys))


def random_dataset(n=60, d=4, n_classes=3, seed=0):
    """Uniform features with balanced, structure-free labels."""
    rng = spawn_rng(seed, "synth", "random")
    x = rng.uniform(0.0, 1.0, size=(n, d))
    y = rng.permutation(np.arange(n) % n_classes)
    return Dataset.from_arrays(x, y)


def make_demo_csv(path, n=150, seed=0):
    """Write a small mixed-type classification table for the CLI demo.

    Two numeric columns carry the class structure; a categorical column adds
    an uninformative nuisance feature.
    """
    rng = spawn_rng(seed, "synth", "demo_csv")
    data = two_gaussians(n=n, seed=seed)
    shades = [["dim", "bright"][int(v)] for v in rng.integers(0, 2, size=n)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x1", "x2", "shade", "label"])
        for i in range(n):
            writer.writerow([
                f"{data.features[i, 0]:.6f}",
                f"{data.features[i, 1]:.6f}",
                shades[i],
                f"c{data.labels[i]}",
            ])
    return path
