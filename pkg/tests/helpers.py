"""Shared test utilities: independent oracles and random-state generators.

The oracles evaluate the sampling-weight formulas directly (no log-space
shift, no shared code with the package) in extended precision: 80-bit
longdouble for bulk checks, mpmath for spot checks of the oracle itself.
"""
from __future__ import annotations

import numpy as np

from msbandits.policy import PolicyConfig, PolicyState


def random_state(
    rng: np.random.Generator,
    k_max: int = 100,
    n_max: int = 10**6,
    mu_bound: float = 10.0,
    k: int | None = None,
) -> PolicyState:
    """A valid post-initialization state with arbitrary counts and means."""
    if k is None:
        k = int(rng.integers(2, k_max + 1))
    counts = rng.integers(1, n_max + 1, size=k).astype(np.int64)
    means = rng.uniform(-mu_bound, mu_bound, size=k)
    return PolicyState(counts, means, int(counts.sum()))


def ms_probs_longdouble(state: PolicyState, sigma2: float) -> np.ndarray:
    """Direct extended-precision evaluation of the sampling weights."""
    counts = state.counts.astype(np.longdouble)
    means = state.means.astype(np.longdouble)
    gaps = means.max() - means
    weights = np.exp(-(counts * gaps * gaps) / (np.longdouble(2) * np.longdouble(sigma2)))
    return weights / weights.sum()


def msplus_probs_longdouble(state: PolicyState, config: PolicyConfig) -> np.ndarray:
    counts = state.counts.astype(np.longdouble)
    means = state.means.astype(np.longdouble)
    best = means == means.max()
    gaps = means.max() - means
    x = (counts * gaps * gaps) / (np.longdouble(2) * np.longdouble(config.sigma2))
    t_dec = np.longdouble(state.t + 1)
    weights = np.empty(state.k, dtype=np.longdouble)
    weights[best] = config.booster * (
        1.0 + config.booster_growth * np.log1p(np.log(t_dec / counts[best]))
    )
    weights[~best] = np.exp(-x[~best] + np.log1p(config.tail_lift * x[~best]))
    return weights / weights.sum()


def ms_probs_mpmath(state: PolicyState, sigma2: float, dps: int = 40) -> np.ndarray:
    """mpmath version, used to validate the longdouble oracle on spot checks."""
    import mpmath as mp

    with mp.workdps(dps):
        means = [mp.mpf(float(m)) for m in state.means]
        mu_max = max(means)
        two_s2 = 2 * mp.mpf(float(sigma2))
        weights = [
            mp.e ** (-(int(n) * (mu_max - m) ** 2) / two_s2)
            for n, m in zip(state.counts, means)
        ]
        total = sum(weights)
        return np.array([float(w / total) for w in weights])


def msplus_probs_mpmath(state: PolicyState, config: PolicyConfig, dps: int = 40) -> np.ndarray:
    import mpmath as mp

    with mp.workdps(dps):
        means = [mp.mpf(float(m)) for m in state.means]
        mu_max = max(means)
        two_s2 = 2 * mp.mpf(float(config.sigma2))
        t_dec = mp.mpf(state.t + 1)
        weights = []
        for n, m in zip(state.counts, means):
            if m == mu_max:
                ratio = t_dec / int(n)
                weights.append(
                    mp.mpf(float(config.booster))
                    * (1 + mp.mpf(float(config.booster_growth)) * mp.log(1 + mp.log(ratio)))
                )
            else:
                x = (int(n) * (mu_max - m) ** 2) / two_s2
                weights.append(mp.e ** (-x + mp.log(1 + mp.mpf(float(config.tail_lift)) * x)))
        total = sum(weights)
        return np.array([float(w / total) for w in weights])
