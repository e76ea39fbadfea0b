"""Bandit policies behind one interface: state -> action (distribution) -> update.

Maillard sampling (``ms``) and its boosted variant (``msplus``) expose the
exact probability of every action in closed form, which is what makes the
logged data they produce directly usable for inverse-propensity scoring.
The remaining policies are the usual index / posterior-sampling baselines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

POLICY_IDS = ("ms", "msplus", "ucb1", "aoucb", "moss", "imed", "ts", "tssg")

#: Policies whose action distribution is available in closed form.
EXPLICIT_DISTRIBUTION_IDS = ("ms", "msplus")


@dataclass
class PolicyState:
    """Per-arm pull counts and empirical means plus the global step counter.

    ``t`` counts total pulls so far; ``means[a]`` is the exact arithmetic mean
    of rewards observed on arm ``a`` (defined only once ``counts[a] >= 1``).
    """

    counts: np.ndarray
    means: np.ndarray
    t: int = 0

    @classmethod
    def fresh(cls, k: int) -> "PolicyState":
        if k < 2:
            raise ValueError("need at least 2 arms")
        return cls(np.zeros(k, dtype=np.int64), np.zeros(k, dtype=np.float64), 0)

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def initialized(self) -> bool:
        """True once every arm has been pulled at least once."""
        return self.t >= self.k and bool((self.counts >= 1).all())


@dataclass(frozen=True)
class EmpiricalGaps:
    """Per-arm distance to the best empirical mean and the set attaining it."""

    max_mean: float
    gaps: np.ndarray
    best_set: tuple[int, ...]


@dataclass(frozen=True)
class PolicyConfig:
    """Shared knobs: sub-Gaussian width, the msplus parameters, and the horizon.

    ``booster`` (B > 1) inflates the empirically-best arms' weight,
    ``booster_growth`` (C in (0,1]) controls its slow log-log growth with
    t/N, and ``tail_lift`` (D in (0,1]) multiplies the non-best weights by
    (1 + D*x). ``horizon`` is only needed by fixed-budget policies (moss).
    """

    sigma2: float = 0.25
    booster: float = 4.0
    booster_growth: float = 0.01
    tail_lift: float = 0.01
    horizon: int | None = None

    def __post_init__(self):
        if self.sigma2 <= 0.0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")


@dataclass(frozen=True)
class ActionDistribution:
    """An explicit probability vector over arms."""

    probs: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.probs)

    def validate(self, tol: float = 1e-12) -> "ActionDistribution":
        p = self.probs
        if p.ndim != 1 or len(p) < 2:
            raise ValueError("distribution must be a vector over >= 2 arms")
        if (p < 0.0).any() or (p > 1.0).any():
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(float(p.sum()) - 1.0) > tol:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        return self


def _require_initialized(state: PolicyState) -> None:
    if not state.initialized:
        raise ValueError(
            f"policy queried before initialization: t={state.t}, K={state.k} "
            "(every arm must be pulled once first)"
        )


def empirical_gaps(state: PolicyState) -> EmpiricalGaps:
    _require_initialized(state)
    max_mean = float(state.means.max())
    gaps = max_mean - state.means
    best = tuple(int(i) for i in np.flatnonzero(state.means == max_mean))
    return EmpiricalGaps(max_mean, gaps, best)


def ms_distribution(state: PolicyState, sigma2: float) -> ActionDistribution:
    """Maillard-sampling action probabilities.

    Each arm gets weight exp(-N_a * gap_a^2 / (2 sigma2)) where gap_a is the
    empirical gap to the best mean; weights are normalized to a distribution.
    Evaluated in log space with a max shift so the largest exponent is 0
    before exponentiation (for MS the shift is 0 by construction, since the
    empirically best arm has zero gap, but the shift keeps the computation
    safe for any state).
    """
    _require_initialized(state)
    if sigma2 <= 0.0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    gaps = state.means.max() - state.means
    exponents = -(state.counts * gaps * gaps) / (2.0 * sigma2)
    weights = np.exp(exponents - exponents.max())
    return ActionDistribution(weights / weights.sum())


def msplus_config_check(config: PolicyConfig) -> PolicyConfig:
    if config.booster <= 1.0:
        raise ValueError(f"booster must exceed 1, got {config.booster}")
    if not 0.0 < config.booster_growth <= 1.0:
        raise ValueError(f"booster_growth must lie in (0, 1], got {config.booster_growth}")
    if not 0.0 < config.tail_lift <= 1.0:
        raise ValueError(f"tail_lift must lie in (0, 1], got {config.tail_lift}")
    return config


def msplus_distribution(state: PolicyState, config: PolicyConfig) -> ActionDistribution:
    """Boosted Maillard-sampling action probabilities.

    Every arm tied for the best empirical mean gets the inflated weight
    B * (1 + C * ln(1 + ln(t/N_a))) with its own pull count N_a and the
    decision-time step counter t (total pulls so far + 1). Every other arm
    gets exp(-x + ln(1 + D*x)) with x = N_a * gap_a^2 / (2 sigma2). Weights
    are normalized to a distribution.
    """
    _require_initialized(state)
    msplus_config_check(config)
    max_mean = state.means.max()
    best = state.means == max_mean
    gaps = max_mean - state.means
    x = (state.counts * gaps * gaps) / (2.0 * config.sigma2)
    t_decision = state.t + 1
    weights = np.empty(state.k, dtype=np.float64)
    ratio = t_decision / state.counts[best]
    weights[best] = config.booster * (1.0 + config.booster_growth * np.log1p(np.log(ratio)))
    rest = ~best
    weights[rest] = np.exp(-x[rest] + np.log1p(config.tail_lift * x[rest]))
    return ActionDistribution(weights / weights.sum())


def sample(dist: ActionDistribution, rng: np.random.Generator) -> int:
    """Inverse-CDF draw; the final bin absorbs any rounding residue."""
    cdf = np.cumsum(dist.probs)
    idx = int(np.searchsorted(cdf, rng.random(), side="right"))
    return min(idx, len(cdf) - 1)


def update(state: PolicyState, arm: int, reward: float) -> PolicyState:
    """Fold one observed reward into the state (running-mean recurrence)."""
    if not 0 <= arm < state.k:
        raise IndexError(f"arm {arm} out of range for K={state.k}")
    state.counts[arm] += 1
    state.means[arm] += (reward - state.means[arm]) / state.counts[arm]
    state.t += 1
    return state


def argmax_first(values: np.ndarray) -> int:
    """Index of the maximum, ties broken by the smallest arm index."""
    return int(np.argmax(values))


def argmin_first(values: np.ndarray) -> int:
    return int(np.argmin(values))


def ucb1_index(state: PolicyState, config: PolicyConfig) -> np.ndarray:
    """mean + sqrt(2 sigma2 ln(t) / N), the classic optimistic index."""
    _require_initialized(state)
    bonus = np.sqrt(2.0 * config.sigma2 * math.log(state.t) / state.counts)
    return state.means + bonus


def aoucb_index(state: PolicyState, config: PolicyConfig) -> np.ndarray:
    """mean + sqrt(2 sigma2 ln(1 + t ln^2 t) / N); ln^2 t clamped below at 1."""
    _require_initialized(state)
    log_t = math.log(state.t)
    f = 1.0 + state.t * max(log_t * log_t, 1.0)
    bonus = np.sqrt(2.0 * config.sigma2 * math.log(f) / state.counts)
    return state.means + bonus


def moss_index(state: PolicyState, config: PolicyConfig) -> np.ndarray:
    """mean + sqrt((4 sigma2 / N) * max(0, ln(T / (K N)))). Needs the horizon."""
    _require_initialized(state)
    if config.horizon is None:
        raise ValueError("moss is fixed-budget: config.horizon must be set")
    log_arg = np.maximum(np.log(config.horizon / (state.k * state.counts)), 0.0)
    return state.means + np.sqrt(4.0 * config.sigma2 * log_arg / state.counts)


def imed_index(state: PolicyState, config: PolicyConfig) -> np.ndarray:
    """N * gap^2 / (2 sigma2) + ln(N); the policy pulls the argmin."""
    _require_initialized(state)
    gaps = state.means.max() - state.means
    x = (state.counts * gaps * gaps) / (2.0 * config.sigma2)
    return x + np.log(state.counts)


def gaussian_posterior_draws(
    state: PolicyState,
    sigma2: float,
    rng: np.random.Generator,
    variance_inflation: float = 1.0,
) -> np.ndarray:
    """One Gaussian posterior sample per arm: N(mean_a, inflation * sigma2 / N_a)."""
    _require_initialized(state)
    std = np.sqrt(variance_inflation * sigma2 / state.counts)
    return state.means + std * rng.standard_normal(state.k)


def ts_sample(state: PolicyState, config: PolicyConfig, rng: np.random.Generator) -> int:
    """Thompson sampling for Gaussian rewards: argmax of posterior draws."""
    return argmax_first(gaussian_posterior_draws(state, config.sigma2, rng))


def tssg_sample(state: PolicyState, config: PolicyConfig, rng: np.random.Generator) -> int:
    """Sub-Gaussian-safe Thompson sampling: posterior variance inflated 4x."""
    return argmax_first(gaussian_posterior_draws(state, config.sigma2, rng, 4.0))


def ts_two_arm_probability(state: PolicyState, sigma2: float) -> float:
    """Exact probability Gaussian TS assigns to the empirically worse of 2 arms.

    With posterior draws N(mean_a, sigma2/N_a), the worse arm wins with
    probability erfc(gap / (sqrt(2) * omega)) / 2 where
    omega^2 = sigma2 * (1/N_1 + 1/N_2).
    """
    if state.k != 2:
        raise ValueError(f"closed form requires exactly 2 arms, got K={state.k}")
    if (state.counts < 1).any():
        raise ValueError("both arms need at least one pull")
    gap = abs(float(state.means[0] - state.means[1]))
    omega = math.sqrt(sigma2 * (1.0 / state.counts[0] + 1.0 / state.counts[1]))
    return 0.5 * math.erfc(gap / (math.sqrt(2.0) * omega))


def parse_policy_id(policy_id: str, base: PolicyConfig | None = None) -> tuple[str, PolicyConfig]:
    """Split a policy id like ``msplus:B=8`` into (name, config).

    Recognized parameter keys are B, C, D (msplus only). ``base`` supplies
    everything not overridden.
    """
    config = base if base is not None else PolicyConfig()
    name, _, params = policy_id.partition(":")
    name = name.strip()
    if name not in POLICY_IDS:
        raise ValueError(f"unknown policy id {name!r}; expected one of {POLICY_IDS}")
    if params:
        if name != "msplus":
            raise ValueError(f"policy {name!r} takes no inline parameters ({policy_id!r})")
        fields = {"B": "booster", "C": "booster_growth", "D": "tail_lift"}
        for part in params.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key not in fields or not value:
                raise ValueError(f"bad parameter {part!r} in policy id {policy_id!r}")
            config = replace(config, **{fields[key]: float(value)})
    if name == "msplus":
        msplus_config_check(config)
    return name, config
