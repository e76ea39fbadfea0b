"""Reward models and the catalog of synthetic bandit problems."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

GAUSSIAN = "gaussian"
BERNOULLI = "bernoulli"

FAMILIES = (
    "gaussian_linear",
    "gaussian_equal",
    "bernoulli_linear",
    "bernoulli_equal",
    "booster_tuning",
)

EQUAL_ARM_COUNTS = (2, 10, 100)
LINEAR_ARM_COUNTS = (10, 100)

DEFAULT_NOISE_VARIANCE = 0.25
BOOSTER_NOISE_VARIANCE = 1.0


@dataclass(frozen=True)
class ArmModel:
    """A single arm's reward distribution with a known mean."""

    kind: str
    mean: float
    variance: float = 0.0

    def __post_init__(self):
        if self.kind not in (GAUSSIAN, BERNOULLI):
            raise ValueError(f"unknown arm kind {self.kind!r}")
        if self.kind == BERNOULLI and not 0.0 <= self.mean <= 1.0:
            raise ValueError(f"Bernoulli mean {self.mean} outside [0, 1]")
        if self.kind == GAUSSIAN and self.variance <= 0.0:
            raise ValueError(f"Gaussian variance must be positive, got {self.variance}")

    @property
    def variance_bound(self) -> float:
        """Sub-Gaussian variance proxy: the Gaussian variance, or 1/4 for Bernoulli."""
        return self.variance if self.kind == GAUSSIAN else 0.25


@dataclass(frozen=True)
class BanditInstance:
    """An ordered set of arms; the ground truth an experiment samples from."""

    arms: tuple[ArmModel, ...]

    def __post_init__(self):
        if len(self.arms) < 2:
            raise ValueError("a bandit instance needs at least 2 arms")

    @property
    def k(self) -> int:
        return len(self.arms)

    @cached_property
    def means(self) -> np.ndarray:
        return np.array([a.mean for a in self.arms], dtype=np.float64)

    @cached_property
    def stds(self) -> np.ndarray:
        """Per-arm reward standard deviation (0 for Bernoulli arms)."""
        return np.array(
            [math.sqrt(a.variance) if a.kind == GAUSSIAN else 0.0 for a in self.arms],
            dtype=np.float64,
        )

    @property
    def best_mean(self) -> float:
        return float(self.means.max())

    @cached_property
    def gaps(self) -> np.ndarray:
        return self.best_mean - self.means

    @property
    def best_arm(self) -> int:
        return int(np.argmax(self.means))

    @property
    def is_bernoulli(self) -> bool:
        return self.arms[0].kind == BERNOULLI


def _linear_means(k: int) -> list[float]:
    return [1.0 - (i / k) for i in range(1, k + 1)]


def make_problem(family: str, k: int, noise_variance: float | None = None) -> BanditInstance:
    """Build one of the catalog problems.

    Linear families use means 1 - i/K; Equal families use one best arm and
    K-1 tied suboptimal arms. ``noise_variance`` applies to Gaussian arms
    only and defaults to 0.25 (the sub-Gaussian width handed to the
    policies); the booster-tuning problem pins it to 1.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown problem family {family!r}; expected one of {FAMILIES}")

    if family == "booster_tuning":
        if k != 10:
            raise ValueError(f"booster_tuning requires K=10, got K={k}")
        if noise_variance is not None and noise_variance != BOOSTER_NOISE_VARIANCE:
            raise ValueError("booster_tuning pins the reward variance to 1")
        means = _linear_means(10)
        arms = tuple(ArmModel(GAUSSIAN, m, BOOSTER_NOISE_VARIANCE) for m in means)
        return BanditInstance(arms)

    kind, shape = family.split("_")
    allowed = EQUAL_ARM_COUNTS if shape == "equal" else LINEAR_ARM_COUNTS
    if k not in allowed:
        raise ValueError(f"family {family!r} supports K in {allowed}, got K={k}")

    if shape == "linear":
        means = _linear_means(k)
    elif kind == "gaussian":
        means = [1.0] + [0.5] * (k - 1)
    else:
        means = [0.1] + [0.05] * (k - 1)

    if kind == "gaussian":
        var = DEFAULT_NOISE_VARIANCE if noise_variance is None else noise_variance
        if var <= 0.0:
            raise ValueError(f"Gaussian noise variance must be positive, got {var}")
        arms = tuple(ArmModel(GAUSSIAN, m, var) for m in means)
    else:
        arms = tuple(ArmModel(BERNOULLI, m) for m in means)
    return BanditInstance(arms)


def pull(instance: BanditInstance, arm: int, rng: np.random.Generator) -> float:
    """Draw one reward from ``arm``; deterministic given the stream state."""
    if not 0 <= arm < instance.k:
        raise IndexError(f"arm {arm} out of range for K={instance.k}")
    model = instance.arms[arm]
    if model.kind == GAUSSIAN:
        return model.mean + math.sqrt(model.variance) * rng.standard_normal()
    return 1.0 if rng.random() < model.mean else 0.0
