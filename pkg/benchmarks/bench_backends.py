"""Compare the numba and pure-numpy quadrature backends.

Runs the same workloads in two subprocesses, one with WARPFT_NUMBA=1 and
one with WARPFT_NUMBA=0, and prints a comparison table.  Each workload is
warmed up once before timing, so numba compilation time is not counted
(compiled kernels are also cached on disk between runs).

Usage: python3 benchmarks/bench_backends.py
"""
from __future__ import annotations

import json
import os
import subprocess
import sys
import time


def _best_of(fn, repeats: int = 3) -> float:
    fn()  # warmup (numba compilation, cache priming)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _run_worker() -> None:
    import numpy as np

    from warpft import _accel
    from warpft.bessel import besselk_imag
    from warpft.funcspace import sinh_warp, validate_warp
    from warpft.oscillatory import QuadratureBudget, transfer_kernel, transfer_kernel_batch

    warp = sinh_warp(1.0)
    cert = validate_warp(warp, (-8.0, 8.0), 257)
    budget = QuadratureBudget(abs_tol=1e-6)
    kgrid = np.linspace(0.25, 4.0, 16)

    timings = {
        "kernel k=1 l=1 tol=1e-6": _best_of(
            lambda: transfer_kernel(warp, 1.0, 1.0, budget, cert)
        ),
        "batch of 16 k, l=1 tol=1e-6": _best_of(
            lambda: transfer_kernel_batch(warp, kgrid, 1.0, budget, cert)
        ),
        "besselk_imag(1.5, 2.0) x20": _best_of(
            lambda: [besselk_imag(1.5, 2.0, rel_tol=1e-12) for _ in range(20)]
        ),
    }
    print(json.dumps({"backend": _accel.backend_name(), "timings": timings}))


def _collect(flag: str) -> dict:
    env = dict(os.environ, WARPFT_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    if "--worker" in sys.argv:
        _run_worker()
        return
    runs = [_collect("1"), _collect("0")]
    names = list(runs[0]["timings"])
    width = max(len(n) for n in names)
    header = f"{'workload':<{width}}  " + "  ".join(
        f"{r['backend']:>10}" for r in runs
    )
    print(header)
    print("-" * len(header))
    for name in names:
        cells = "  ".join(f"{r['timings'][name]:>9.4f}s" for r in runs)
        ratio = runs[1]["timings"][name] / runs[0]["timings"][name]
        print(f"{name:<{width}}  {cells}  ({ratio:.1f}x)")


if __name__ == "__main__":
    main()
