"""Compare the compiled kernels against the NumPy fallback.

Runs both implementations on identical inputs, checks that they agree, and
prints per-kernel timings. Useful after touching either implementation:

    python3 benchmarks/bench_kernels.py --points 200000 --pairs 300000
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from taskgrasp._kernels import fallback

try:
    from taskgrasp._kernels import _core as compiled
except ImportError:
    compiled = None


def _time(fn, args, repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def splat_inputs(n: int, height: int, width: int, seed: int):
    rng = np.random.default_rng(seed)
    us = rng.integers(0, width, n).astype(np.int32)
    vs = rng.integers(0, height, n).astype(np.int32)
    zs = rng.uniform(0.3, 1.5, n).astype(np.float32)
    labels = rng.integers(1, 2048, n).astype(np.int32)
    return us, vs, zs, labels, height, width, 1


def antipodal_inputs(n: int, pairs: int, seed: int):
    rng = np.random.default_rng(seed)
    points = rng.normal(0.0, 0.05, (n, 3))
    normals = rng.normal(0.0, 1.0, (n, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    ii = rng.integers(0, n, pairs).astype(np.int64)
    jj = rng.integers(0, n, pairs).astype(np.int64)
    return (np.ascontiguousarray(points), np.ascontiguousarray(normals),
            ii, jj, 0.004, 0.09, math.cos(math.radians(15.0)))


def check_agreement(name: str, a, b) -> None:
    for got, want in zip(a, b):
        if got.dtype.kind == "f":
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12,
                                       err_msg=f"{name} outputs diverge")
        else:
            np.testing.assert_array_equal(got, want,
                                          err_msg=f"{name} outputs diverge")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000,
                        help="samples splatted into the z-buffer")
    parser.add_argument("--pairs", type=int, default=300_000,
                        help="point pairs run through the antipodal test")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats; the best run is reported")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if compiled is None:
        print("compiled extension not built; timing the fallback only")

    workloads = [
        ("splat_zbuffer", splat_inputs(args.points, 720, 960, args.seed)),
        ("antipodal_eval", antipodal_inputs(max(16, args.points // 40),
                                            args.pairs, args.seed)),
    ]

    header = f"{'kernel':<16} {'fallback':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, inputs in workloads:
        slow = _time(getattr(fallback, name), inputs, args.repeats)
        if compiled is None:
            print(f"{name:<16} {slow * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
            continue
        fast = _time(getattr(compiled, name), inputs, args.repeats)
        check_agreement(name, getattr(compiled, name)(*inputs),
                        getattr(fallback, name)(*inputs))
        print(f"{name:<16} {slow * 1e3:>10.2f}ms {fast * 1e3:>10.2f}ms "
              f"{slow / fast:>8.1f}x")


if __name__ == "__main__":
    main()
