"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_backends.py [--calls 2000] [--starts 8]

Kernels are warmed up before timing, so numba compile time is excluded.
"""
import argparse
import time

import numpy as np

from qbell import OptimizerConfig
from qbell.bell import maximize_bell
from qbell.correlations import q_projective
from qbell.kernels import HAVE_NUMBA, get_kernels
from qbell.qstate import StateParams, build_state_phi_a


def _best_of(fn, repeat=3):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernel(name, rho, ints, dim, calls, seed=0):
    xs = np.random.default_rng(seed).uniform(0, np.pi, (calls, dim))
    out = {}
    for backend in ("numba", "numpy"):
        f = get_kernels(backend)[name]
        f(xs[0], rho, ints)
        out[backend] = _best_of(lambda: [f(x, rho, ints) for x in xs]) / calls
    return out


def bench_optimizer(rho, starts):
    out = {}
    for backend in ("numba", "numpy"):
        cfg = OptimizerConfig(starts=starts, backend=backend)
        maximize_bell(rho, cfg=OptimizerConfig(starts=1, backend=backend))
        q_projective(rho, OptimizerConfig(starts=1, backend=backend))
        out[backend] = (
            _best_of(lambda: maximize_bell(rho, cfg=cfg), repeat=1),
            _best_of(lambda: q_projective(rho, cfg), repeat=1),
        )
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--calls", type=int, default=2000)
    ap.add_argument("--starts", type=int, default=8)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rho = build_state_phi_a(StateParams(11 * np.pi / 6, 0.9)).matrix
    rows = [
        ("bell_value (per call)", bench_kernel("bell_value", rho, np.array([0, 0]), 8, args.calls)),
        ("measured_mi (per call)", bench_kernel("measured_mi", rho, np.array([0]), 12, args.calls)),
    ]
    opt = bench_optimizer(rho, args.starts)
    rows.append((f"maximize_bell, {args.starts} starts", {k: v[0] for k, v in opt.items()}))
    rows.append((f"q_projective, {args.starts} starts", {k: v[1] for k, v in opt.items()}))

    print(f"{'benchmark':<28}{'numba [s]':>14}{'numpy [s]':>14}{'speedup':>10}")
    for name, t in rows:
        print(f"{name:<28}{t['numba']:>14.3e}{t['numpy']:>14.3e}{t['numpy'] / t['numba']:>9.1f}x")


if __name__ == "__main__":
    main()
