"""Benchmark the compiled trial kernel against the pure-Python fallback.

Runs the same seeded trials through both backends, checks they agree
bit-for-bit, and reports per-step cost and speedup.

    python benchmarks/bench_backends.py [--horizon 20000] [--repeats 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from msbandits import engine
from msbandits.env import make_problem

GRID = [
    ("ms", "gaussian_equal", 2),
    ("ms", "gaussian_equal", 10),
    ("ms", "gaussian_equal", 100),
    ("msplus", "gaussian_equal", 10),
    ("msplus", "gaussian_equal", 100),
    ("ucb1", "gaussian_linear", 10),
    ("aoucb", "gaussian_linear", 100),
    ("moss", "gaussian_linear", 10),
    ("imed", "bernoulli_linear", 10),
    ("ts", "gaussian_equal", 10),
    ("tssg", "gaussian_equal", 100),
]


def run_once(policy, instance, horizon, seed, backend):
    gen = np.random.Generator(np.random.PCG64(seed))
    return engine.run_trial_core(
        engine.KIND_BY_ID[policy], instance.means, instance.stds,
        instance.is_bernoulli, instance.gaps, 0.25, 8.0, 0.01, 0.01,
        horizon, horizon, gen, backend=backend,
    )


def time_backend(policy, instance, horizon, backend, repeats):
    best = float("inf")
    for rep in range(repeats):
        t0 = time.perf_counter()
        run_once(policy, instance, horizon, 1234 + rep, backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--horizon", type=int, default=20_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = engine.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the python backend is available")
        return 1

    header = f"{'policy':8} {'problem':22} {'cython us/step':>15} {'python us/step':>15} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for policy, family, k in GRID:
        instance = make_problem(family, k)
        fast = run_once(policy, instance, args.horizon, 1234, "cython")
        slow = run_once(policy, instance, args.horizon, 1234, "python")
        if not (np.array_equal(fast.pulls, slow.pulls) and fast.regret == slow.regret):
            print(f"{policy} on {family} K={k}: BACKENDS DISAGREE")
            return 1
        t_fast = time_backend(policy, instance, args.horizon, "cython", args.repeats)
        t_slow = time_backend(policy, instance, args.horizon, "python", args.repeats)
        us = 1e6 / args.horizon
        print(f"{policy:8} {family + f' K={k}':22} {t_fast * us:>15.3f} "
              f"{t_slow * us:>15.3f} {t_slow / t_fast:>7.1f}x")
    print("\nall compared trials bit-identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
