"""Time the compiled kernels against the NumPy fallback.

Runs every kernel that exists in both backends on the same inputs, checks
the outputs are bit-identical, and reports best-of-N wall times.  Usage:

    python3 benchmarks/bench_kernels.py [--repeats 5] [--scale 1.0]
"""

import argparse
import time

import numpy as np

from hardmap.kernels import _pykern

try:
    from hardmap.kernels import _ckern
except ImportError:
    _ckern = None


def _best_of(fn, args, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def _same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b, equal_nan=True)
    if isinstance(a, float) and np.isnan(a):
        return isinstance(b, float) and np.isnan(b)
    return a == b


def build_cases(scale):
    rng = np.random.default_rng(0)
    cases = []

    for n in (int(300 * scale), int(900 * scale)):
        x = rng.normal(size=(n, 10))
        cases.append((f"pairwise_sqdist      n={n:>5} d=10", "pairwise_sqdist", (x,)))

    for m in (int(1000 * scale), int(4000 * scale)):
        x = rng.normal(size=(m, 10))
        y = rng.integers(0, 3, size=m).astype(np.int64)
        cases.append((f"best_gini_split      m={m:>5} d=10", "best_gini_split", (x, y, 3, 1)))
        r = rng.normal(size=m)
        cases.append((f"best_sse_split       m={m:>5} d=10", "best_sse_split", (x, r, 1)))

    for n in (int(300 * scale), int(900 * scale)):
        x = rng.normal(size=(n, 6))
        d2 = _pykern.pairwise_sqdist(x)
        cases.append((f"prim_mst             n={n:>5}", "prim_mst", (d2,)))
        eps = float(np.sqrt(np.median(np.sort(d2, axis=1)[:, 5])))
        cases.append((f"dbscan_labels        n={n:>5}", "dbscan_labels", (d2, eps, 6)))

    return cases


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5, help="best-of-N timing (default 5)")
    ap.add_argument("--scale", type=float, default=1.0, help="multiply all problem sizes")
    args = ap.parse_args()

    if _ckern is None:
        raise SystemExit("compiled backend not importable; build it first (pip install -e .)")

    print(f"{'kernel / size':<34} {'numpy':>10} {'compiled':>10} {'speedup':>8}   identical")
    print("-" * 78)
    for label, name, call in build_cases(args.scale):
        py_out, py_t = _best_of(getattr(_pykern, name), call, args.repeats)
        c_out, c_t = _best_of(getattr(_ckern, name), call, args.repeats)
        ok = _same(py_out, c_out)
        print(
            f"{label:<34} {py_t * 1e3:>8.2f}ms {c_t * 1e3:>8.2f}ms"
            f" {py_t / c_t:>7.1f}x   {'yes' if ok else 'NO <-- MISMATCH'}"
        )
        if not ok:
            raise SystemExit(f"{name}: backends disagree")


if __name__ == "__main__":
    main()
