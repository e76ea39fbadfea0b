"""Per-trial simulation core with a compiled fast path.

The hot loop (decide arm, draw reward, update state, account regret) exists
twice: ``_kernel`` is a Cython extension, ``_fallback`` is plain Python. Both
consume the caller's PCG64 stream through the same draw protocol, in the same
order, with the same scalar arithmetic, so a trial is bit-identical across
backends. The compiled backend is selected at import when available; set
``BANDIT_PURE_PYTHON=1`` to force the fallback.

Draw protocol per step (t1 = 1-based step index, K arms):
  * t1 <= K: forced pull of arm t1-1, no decision draw.
  * ms / msplus: one uniform for the inverse-CDF action draw.
  * ucb1 / aoucb / moss / imed: no decision draw (deterministic argmax/argmin).
  * ts / tssg: K standard normals, arm order 0..K-1.
  * reward: one standard normal (Gaussian arm) or one uniform (Bernoulli arm).
"""
from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from . import _fallback

try:
    from . import _kernel
except ImportError:  # extension not built; the fallback covers everything
    _kernel = None

MS, MSPLUS, UCB1, AOUCB, MOSS, IMED, TS, TSSG = range(8)

KIND_BY_ID = {
    "ms": MS,
    "msplus": MSPLUS,
    "ucb1": UCB1,
    "aoucb": AOUCB,
    "moss": MOSS,
    "imed": IMED,
    "ts": TS,
    "tssg": TSSG,
}

BACKENDS = ("cython", "python")


def _env_forces_python() -> bool:
    return os.environ.get("BANDIT_PURE_PYTHON", "").strip().lower() in ("1", "true", "yes")


ACTIVE_BACKEND = "python" if (_kernel is None or _env_forces_python()) else "cython"


def available_backends() -> tuple[str, ...]:
    return BACKENDS if _kernel is not None else ("python",)


class TrialOutput(NamedTuple):
    pulls: np.ndarray
    regret: float
    traj_steps: np.ndarray
    traj_regret: np.ndarray
    arms: np.ndarray | None
    rewards: np.ndarray | None
    propensities: np.ndarray | None


def run_trial_core(
    kind: int,
    means: np.ndarray,
    stds: np.ndarray,
    bernoulli: bool,
    gaps: np.ndarray,
    sigma2: float,
    booster: float,
    booster_growth: float,
    tail_lift: float,
    moss_horizon: int,
    n_steps: int,
    gen: np.random.Generator,
    stride: int = 0,
    record_log: bool = False,
    backend: str | None = None,
) -> TrialOutput:
    """Run one full trial of ``n_steps`` pulls and return its accounting.

    ``stride`` > 0 records the cumulative pseudo-regret every ``stride`` steps
    (plus the final step); ``record_log`` additionally returns per-step
    (arm, reward, propensity) arrays, with propensity 1 for forced pulls and
    for policies without an explicit distribution.
    """
    name = backend or ACTIVE_BACKEND
    if name == "cython" and _kernel is None:
        raise RuntimeError("compiled backend requested but msbandits._kernel is not built")
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    impl = _kernel.run_trial if name == "cython" else _fallback.run_trial
    if kind == MOSS and moss_horizon < 1:
        raise ValueError("moss is fixed-budget: moss_horizon must be >= 1")
    means = np.ascontiguousarray(means, dtype=np.float64)
    stds = np.ascontiguousarray(stds, dtype=np.float64)
    gaps = np.ascontiguousarray(gaps, dtype=np.float64)
    if not n_steps >= 1:
        raise ValueError("n_steps must be >= 1")
    out = impl(
        kind,
        means,
        stds,
        1 if bernoulli else 0,
        gaps,
        float(sigma2),
        float(booster),
        float(booster_growth),
        float(tail_lift),
        int(moss_horizon),
        int(n_steps),
        gen,
        int(stride),
        1 if record_log else 0,
    )
    return TrialOutput(*out)
