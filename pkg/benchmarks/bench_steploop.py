"""Time the compiled step-loop kernel against the NumPy fallback.

The integration hot loop is the repeated affine map x <- R x + s. This
script runs the same workload through both kernels (when the compiled one
is available), checks that they agree, and reports per-step timings.

Usage: python benchmarks/bench_steploop.py [--dim 216] [--steps 200000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sylflow import _steploop_py

try:
    from sylflow import _steploop
except ImportError:
    _steploop = None


def workload(dim: int, steps: int, stride: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    R = 0.999 * Q  # contraction: the state stays bounded for any horizon
    s = 0.01 * rng.standard_normal(dim)
    x0 = rng.standard_normal(dim)
    samples = np.arange(0, steps + 1, stride, dtype=np.int64)
    if samples[-1] != steps:
        samples = np.append(samples, steps)
    return np.ascontiguousarray(R), s, x0, samples


def time_kernel(kernel, R, s, x0, steps, samples, repeats: int):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out, bad = kernel.run(R, s, x0, steps, samples, 1e12)
        elapsed = time.perf_counter() - t0
        assert bad < 0, "guard tripped in benchmark workload"
        best = min(best, elapsed)
    return best, out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=216, help="state dimension")
    ap.add_argument("--steps", type=int, default=200_000, help="integration steps")
    ap.add_argument("--stride", type=int, default=1000, help="sampling stride")
    ap.add_argument("--repeats", type=int, default=3, help="timing repeats (best of)")
    args = ap.parse_args()

    R, s, x0, samples = workload(args.dim, args.steps, args.stride)
    print(f"workload: dim={args.dim}, steps={args.steps}, {samples.size} samples")

    t_py, out_py = time_kernel(_steploop_py, R, s, x0, args.steps, samples, args.repeats)
    print(f"numpy    kernel: {t_py:8.3f} s  ({1e9 * t_py / args.steps:8.1f} ns/step)")

    if _steploop is None:
        print("compiled kernel: not built (pure-Python install)")
        return 0

    t_c, out_c = time_kernel(_steploop, R, s, x0, args.steps, samples, args.repeats)
    print(f"compiled kernel: {t_c:8.3f} s  ({1e9 * t_c / args.steps:8.1f} ns/step)")
    print(f"speedup: {t_py / t_c:.2f}x")
    gap = float(np.max(np.abs(out_py - out_c)))
    print(f"max |difference| between kernels: {gap:.3g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
