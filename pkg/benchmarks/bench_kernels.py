"""Benchmark the compiled chain kernels against the pure-Python fallback.

Times the raw objective (chain propagation + SE) and a representative
placement optimization on both backends. Run from the repo root:

    python benchmarks/bench_kernels.py
"""

import importlib
import os
import sys
import time

import numpy as np


def time_call(fn, *args, repeat=5, number=2000):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def load_backends():
    from linkcap import _chainkernels_py

    backends = {"python": _chainkernels_py}
    try:
        from linkcap import _chainkernels

        backends["cython"] = _chainkernels
    except ImportError:
        print("compiled extension not available; benchmarking fallback only")
    return backends


def bench_objective(backends):
    alpha, nbar, total = 0.05, 100.0, 1000.0
    print(f"{'objective (logits -> SE)':<34}{'per call':>12}{'speedup':>10}")
    base = {}
    for n in (4, 16, 64):
        logits = np.linspace(-0.3, 0.3, n)
        for name, mod in backends.items():
            dt = time_call(
                mod.saturating_se_logits, logits, total, alpha, nbar, True
            )
            label = f"  N={n:<3d} {name}"
            rel = ""
            if name == "python":
                base[n] = dt
            elif n in base:
                rel = f"{base[n] / dt:9.1f}x"
            print(f"{label:<34}{dt * 1e6:9.2f} us{rel:>11}")


def bench_optimize():
    import linkcap
    from linkcap import kernels

    prob = linkcap.OptimizationProblem(400.0, 8, 0.05, 100.0, "holevo")
    settings = linkcap.OptimizerSettings(starts=2)
    t0 = time.perf_counter()
    res = linkcap.optimize(prob, settings)
    dt = time.perf_counter() - t0
    print(
        f"optimize N=8 L=400 holevo [{kernels.backend_name()}]: "
        f"{dt:.2f} s, {res.evaluations} evaluations, se={res.se:.6f}"
    )


def main():
    backends = load_backends()
    bench_objective(backends)
    print()
    bench_optimize()
    if os.environ.get("LINKCAP_PURE_PYTHON"):
        return
    print("re-running optimize on the pure backend (LINKCAP_PURE_PYTHON=1)...")
    os.environ["LINKCAP_PURE_PYTHON"] = "1"
    for mod in list(sys.modules):
        if mod.startswith("linkcap"):
            del sys.modules[mod]
    importlib.invalidate_caches()
    bench_optimize()


if __name__ == "__main__":
    main()
