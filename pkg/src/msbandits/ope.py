"""Off-policy evaluation on logs with exact action propensities.

Maillard sampling and its boosted variant know the probability of every
action they take, so each log record carries the true propensity and
inverse-propensity scoring needs no propensity model. For policies without a
closed form (e.g. Thompson sampling) ``mc_propensity`` estimates the action
distribution by brute-force resampling, which is exactly the per-decision
cost the closed form avoids.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import engine
from .env import BanditInstance
from .harness import fmt, trial_generator
from .policy import EXPLICIT_DISTRIBUTION_IDS, PolicyConfig, parse_policy_id


@dataclass(frozen=True)
class LogRecord:
    """One logged interaction; ``arm`` is 0-based in memory, 1-based on disk."""

    step: int
    arm: int
    reward: float
    propensity: float


@dataclass(frozen=True)
class IpsEstimate:
    value: float
    std_error: float
    n_records: int


def log_run(
    policy: str,
    instance: BanditInstance,
    horizon: int,
    seed: int,
    config: PolicyConfig | None = None,
) -> list[LogRecord]:
    """Run a closed-form policy for ``horizon`` steps and log its propensities.

    Initialization steps are forced pulls and record propensity 1; every
    later record carries the exact probability with which its arm was drawn.
    """
    name, pcfg = parse_policy_id(policy, config or PolicyConfig())
    if name not in EXPLICIT_DISTRIBUTION_IDS:
        raise ValueError(
            f"policy {name!r} has no explicit action distribution; "
            f"logging supports {EXPLICIT_DISTRIBUTION_IDS}"
        )
    out = engine.run_trial_core(
        engine.KIND_BY_ID[name],
        instance.means,
        instance.stds,
        instance.is_bernoulli,
        instance.gaps,
        pcfg.sigma2,
        pcfg.booster,
        pcfg.booster_growth,
        pcfg.tail_lift,
        0,
        horizon,
        trial_generator(seed),
        record_log=True,
    )
    return [
        LogRecord(i + 1, int(out.arms[i]), float(out.rewards[i]), float(out.propensities[i]))
        for i in range(horizon)
    ]


def ips_value(records: list[LogRecord], target) -> IpsEstimate:
    """Inverse-propensity estimate of a stationary target distribution's value.

    Averages target(arm)/propensity * reward over the post-initialization
    records (the first K forced pulls are not draws from the policy).
    """
    target = np.asarray(getattr(target, "probs", target), dtype=np.float64)
    k = len(target)
    if (target < 0).any() or abs(float(target.sum()) - 1.0) > 1e-9:
        raise ValueError("target must be a probability vector over the arms")
    post = [r for r in records if r.step > k]
    if not post:
        raise ValueError("log has no post-initialization records to score")
    terms = np.empty(len(post), dtype=np.float64)
    for i, r in enumerate(post):
        if r.propensity <= 0.0:
            raise ValueError(f"record at step {r.step} has non-positive propensity")
        terms[i] = target[r.arm] / r.propensity * r.reward
    se = float(np.std(terms, ddof=1) / np.sqrt(len(terms))) if len(terms) > 1 else 0.0
    return IpsEstimate(float(terms.mean()), se, len(terms))


def mc_propensity(
    draw_action: Callable[[np.random.Generator], int],
    n_arms: int,
    n_samples: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Monte-Carlo propensity estimate from repeated action draws.

    Returns per-arm frequencies floored at 1/(2 n_samples) so the result is
    safe as an IPS denominator; the floor means entries can sum to slightly
    more than 1.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    counts = np.zeros(n_arms, dtype=np.int64)
    for _ in range(n_samples):
        counts[draw_action(rng)] += 1
    freq = counts / n_samples
    return np.maximum(freq, 1.0 / (2.0 * n_samples))


def write_log_csv(records: list[LogRecord], path) -> None:
    """CSV with header step,arm,reward,propensity; arms 1-indexed."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "arm", "reward", "propensity"])
        for r in records:
            writer.writerow([r.step, r.arm + 1, fmt(r.reward), fmt(r.propensity)])


def read_log_csv(path) -> list[LogRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            LogRecord(int(row["step"]), int(row["arm"]) - 1,
                      float(row["reward"]), float(row["propensity"]))
            for row in reader
        ]


def write_log_jsonl(records: list[LogRecord], path) -> None:
    """JSON lines, one record per line; arms 1-indexed as in the CSV."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({
                "step": r.step,
                "arm": r.arm + 1,
                "reward": float(fmt(r.reward)),
                "propensity": float(fmt(r.propensity)),
            }))
            fh.write("\n")


def read_log_jsonl(path) -> list[LogRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            records.append(
                LogRecord(row["step"], row["arm"] - 1, row["reward"], row["propensity"])
            )
    return records
