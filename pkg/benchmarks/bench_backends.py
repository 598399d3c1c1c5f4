"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two workloads that dominate real sweeps: exact density-matrix
evolution of the transpiled phase-estimation circuit, and Monte Carlo
trajectory sampling.

Run:  python benchmarks/bench_backends.py [--shots 20000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qpe_lab import kernels
from qpe_lab.channels import make_channel
from qpe_lab.circuit import build_qpe
from qpe_lab.engine import SimSpec, run_exact, run_trajectories
from qpe_lab.transpile import transpile


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(shots: int, repeat: int) -> None:
    if "numba" not in kernels.available_backends():
        print("numba not available; nothing to compare")
        return

    cases = []
    for n in (5, 7, 8):
        spec = SimSpec(
            circuit=transpile(build_qpe(n, 1 / 32)),
            channel=make_channel("depolarizing", 0.01),
        )
        cases.append((f"exact n={n} (dim {2 ** (n + 1)})", lambda s=spec: run_exact(s)))
    traj_spec = SimSpec(
        circuit=transpile(build_qpe(4, 0.3125)),
        channel=make_channel("depolarizing", 0.01),
        seed=7,
    )
    cases.append(
        (f"trajectories n=4, {shots} shots", lambda: run_trajectories(traj_spec, shots))
    )

    # warm up the jit cache before timing
    kernels.set_backend("numba")
    for _, fn in cases:
        fn()

    print(f"{'workload':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fn in cases:
        kernels.set_backend("numba")
        t_numba = _time(fn, repeat)
        kernels.set_backend("numpy")
        t_numpy = _time(fn, repeat)
        print(
            f"{name:34s} {t_numba * 1e3:9.1f}ms {t_numpy * 1e3:9.1f}ms "
            f"{t_numpy / t_numba:7.1f}x"
        )
    kernels.set_backend("numba")

    # both backends must agree on the physics they produce
    spec = SimSpec(
        circuit=transpile(build_qpe(5, 1 / 32)),
        channel=make_channel("bitphaseflip", 0.02),
    )
    kernels.set_backend("numba")
    a = run_exact(spec).probs
    kernels.set_backend("numpy")
    b = run_exact(spec).probs
    print(f"max |numba - numpy| on exact probs: {np.abs(a - b).max():.3e}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    bench(args.shots, args.repeat)


if __name__ == "__main__":
    main()
