"""Deterministic seeded experiment runner: trials, pseudo-regret trajectories,
cross-trial aggregation, and grids of experiments.

Every trial's stream derives from (base_seed, trial_index) through numpy's
SeedSequence hashing, so results never depend on execution order or worker
count; pseudo-regret accumulates true-mean gaps, never realized rewards.
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import engine
from .env import BanditInstance, make_problem
from .policy import PolicyConfig, parse_policy_id

DEFAULT_TRAJECTORY_STRIDE = 100


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    n_arms: int
    policy: str
    horizon: int
    trials: int
    base_seed: int
    noise_variance: float | None = None
    policy_config: PolicyConfig = field(default_factory=PolicyConfig)
    trajectory_stride: int = DEFAULT_TRAJECTORY_STRIDE

    def __post_init__(self):
        if self.horizon <= self.n_arms:
            raise ValueError(f"horizon {self.horizon} must exceed K={self.n_arms}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def instance(self) -> BanditInstance:
        return make_problem(self.family, self.n_arms, self.noise_variance)


@dataclass(frozen=True)
class TrialResult:
    trial: int
    seed: int
    final_regret: float
    pulls: np.ndarray
    traj_steps: np.ndarray
    traj_regret: np.ndarray


@dataclass(frozen=True)
class ExperimentSummary:
    policy: str
    mean_regret: float
    std_regret: float
    max_regret: float
    trials: int
    config: dict

    def to_dict(self) -> dict:
        return {
            "policy": self.policy,
            "mean_regret": self.mean_regret,
            "std_regret": self.std_regret,
            "max_regret": self.max_regret,
            "trials": self.trials,
            "config": self.config,
        }


def trial_seed(base_seed: int, trial_index: int) -> int:
    """64-bit stream seed for one trial, derived by SeedSequence spawning."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(trial_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def trial_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: requested (0 = auto), capped by BANDIT_THREADS (0 = auto)."""
    n = os.cpu_count() or 1
    if requested is not None and requested > 0:
        n = requested
    cap = os.environ.get("BANDIT_THREADS", "").strip()
    if cap:
        cap_n = int(cap)
        if cap_n > 0:
            n = min(n, cap_n)
    return max(n, 1)


def _policy_kind_and_config(config: ExperimentConfig) -> tuple[int, PolicyConfig]:
    name, pcfg = parse_policy_id(config.policy, config.policy_config)
    if name == "moss" and pcfg.horizon is None:
        pcfg = replace(pcfg, horizon=config.horizon)
    return engine.KIND_BY_ID[name], pcfg


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialResult:
    """One seeded trial: round-robin initialization then the policy loop."""
    instance = config.instance()
    kind, pcfg = _policy_kind_and_config(config)
    seed = trial_seed(config.base_seed, trial_index)
    out = engine.run_trial_core(
        kind,
        instance.means,
        instance.stds,
        instance.is_bernoulli,
        instance.gaps,
        pcfg.sigma2,
        pcfg.booster,
        pcfg.booster_growth,
        pcfg.tail_lift,
        pcfg.horizon or 0,
        config.horizon,
        trial_generator(seed),
        stride=config.trajectory_stride,
    )
    return TrialResult(trial_index, seed, out.regret, out.pulls, out.traj_steps, out.traj_regret)


def run_trials(config: ExperimentConfig, workers: int | None = None) -> list[TrialResult]:
    """All trials, in trial-index order regardless of scheduling."""
    n_workers = resolve_workers(workers)
    indexes = range(config.trials)
    if n_workers <= 1 or config.trials == 1:
        return [run_trial(config, i) for i in indexes]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(lambda i: run_trial(config, i), indexes))


def summarize(config: ExperimentConfig, results: list[TrialResult]) -> ExperimentSummary:
    results = sorted(results, key=lambda r: r.trial)
    regrets = np.array([r.final_regret for r in results], dtype=np.float64)
    std = float(np.std(regrets, ddof=1)) if len(regrets) > 1 else 0.0
    return ExperimentSummary(
        policy=config.policy,
        mean_regret=float(regrets.mean()),
        std_regret=std,
        max_regret=float(regrets.max()),
        trials=len(results),
        config={
            "family": config.family,
            "K": config.n_arms,
            "noise_variance": config.noise_variance,
            "T": config.horizon,
            "base_seed": config.base_seed,
            "sigma2": config.policy_config.sigma2,
        },
    )


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> ExperimentSummary:
    return summarize(config, run_trials(config, workers))


def sweep(grid: list[ExperimentConfig], workers: int | None = None) -> list[ExperimentSummary]:
    """run_experiment over the grid, preserving order."""
    return [run_experiment(cfg, workers) for cfg in grid]


def fmt(value) -> str:
    """Fixed 12-significant-digit formatting for all result files."""
    if isinstance(value, float):
        return f"{value:.12g}"
    return "" if value is None else str(value)


def write_trials_csv(results: list[TrialResult], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["trial", "seed", "final_regret"])
        for r in sorted(results, key=lambda x: x.trial):
            writer.writerow([r.trial, r.seed, fmt(r.final_regret)])


def write_trajectories_csv(results: list[TrialResult], path) -> None:
    """Long-format trajectory dump: one row per stored (trial, step) pair."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["trial", "step", "cum_regret"])
        for r in sorted(results, key=lambda x: x.trial):
            for step, value in zip(r.traj_steps, r.traj_regret):
                writer.writerow([r.trial, int(step), fmt(float(value))])


def write_summaries_csv(summaries: list[ExperimentSummary], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["policy", "family", "K", "noise_variance", "T", "sigma2",
             "trials", "base_seed", "mean_regret", "std_regret", "max_regret"]
        )
        for s in summaries:
            c = s.config
            writer.writerow(
                [s.policy, c["family"], c["K"], fmt(c["noise_variance"]), c["T"],
                 fmt(c["sigma2"]), s.trials, c["base_seed"], fmt(s.mean_regret),
                 fmt(s.std_regret), fmt(s.max_regret)]
            )


def round12(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: round12(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [round12(v) for v in obj]
    return obj


def write_summaries_json(summaries: list[ExperimentSummary], path) -> None:
    payload = [round12(s.to_dict()) for s in summaries]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
