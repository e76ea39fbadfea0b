"""Command-line entry point: config parsing, experiment orchestration, result
files, and SVG figures.

Config files are flat INI text with [section] headers; every key can be
overridden on the command line with ``--key=value`` (or ``--section.key=value``
when the key exists in more than one section). Exit codes: 0 success,
1 runtime error, 2 config error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import bounds as bounds_mod
from . import engine, ope
from .env import make_problem
from .harness import (
    ExperimentConfig,
    fmt,
    round12,
    run_trials,
    summarize,
    trial_seed,
    write_summaries_csv,
    write_summaries_json,
    write_trajectories_csv,
    write_trials_csv,
)
from .policy import PolicyConfig, PolicyState, ms_distribution, parse_policy_id, ts_sample, update
from .svgplot import bar_chart, line_chart

DEFAULT_POLICIES = "ms, msplus:B=4, msplus:B=8, msplus:B=16, ucb1, aoucb, moss, imed, ts, tssg"

DEFAULTS: dict[str, dict[str, str]] = {
    "problem": {"family": "gaussian_equal", "K": "10", "noise_variance": ""},
    "run": {
        "T": "20000",
        "trials": "200",
        "base_seed": "2021",
        "outdir": "out",
        "stride": "100",
        "per_trial_csv": "false",
        "trajectories": "false",
        "svg": "true",
        "workers": "0",
    },
    "policies": {"ids": DEFAULT_POLICIES},
    "policy": {"sigma2": "", "B": "8", "C": "0.01", "D": "0.01"},
    "booster": {"grid": "2,4,8,16,32,64,128", "trials": ""},
    "ope": {
        "logger": "ms",
        "n_logs": "100",
        "T": "2000",
        "targets": "",
        "mc_samples": "10000",
    },
    "bounds": {"c": "1.0"},
}

#: CSS class per baseline for the figure semantics: shaded = no guarantee for
#: sub-Gaussian rewards, hatched = fixed-budget (needs the horizon).
POLICY_CLASSES = {"ts": "no-guarantee", "imed": "no-guarantee", "moss": "fixed-budget"}


class ConfigError(Exception):
    pass


class RunSpec:
    """Parsed configuration with typed, diagnostic-friendly accessors."""

    def __init__(self, sections: dict[str, dict[str, str]]):
        self.sections = sections

    def get(self, section: str, key: str) -> str:
        try:
            return self.sections[section][key]
        except KeyError:
            raise ConfigError(f"missing field [{section}] {key}") from None

    def get_int(self, section: str, key: str) -> int:
        raw = self.get(section, key)
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"field [{section}] {key}: expected integer, got {raw!r}") from None

    def get_float(self, section: str, key: str) -> float:
        raw = self.get(section, key)
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"field [{section}] {key}: expected number, got {raw!r}") from None

    def get_bool(self, section: str, key: str) -> bool:
        raw = self.get(section, key).strip().lower()
        if raw in ("1", "true", "yes", "on"):
            return True
        if raw in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"field [{section}] {key}: expected boolean, got {raw!r}")

    def get_list(self, section: str, key: str) -> list[str]:
        raw = self.get(section, key)
        return [item.strip() for item in raw.split(",") if item.strip()]


def parse_overrides(tokens: list[str]) -> dict[str, str]:
    overrides = {}
    for token in tokens:
        if not token.startswith("--") or "=" not in token:
            raise ConfigError(f"unrecognized argument {token!r}; overrides look like --key=value")
        key, _, value = token[2:].partition("=")
        overrides[key.strip()] = value.strip()
    return overrides


def load_spec(config_path: str | None, overrides: dict[str, str]) -> RunSpec:
    sections = {name: dict(keys) for name, keys in DEFAULTS.items()}
    if config_path:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            with open(config_path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as err:
            raise ConfigError(f"cannot read config {config_path}: {err}") from None
        except configparser.Error as err:
            raise ConfigError(str(err)) from None
        for section in parser.sections():
            if section not in sections:
                raise ConfigError(f"unknown config section [{section}]")
            for key, value in parser.items(section):
                if key not in sections[section]:
                    raise ConfigError(f"unknown field [{section}] {key}")
                sections[section][key] = value
    for key, value in overrides.items():
        section, _, field = key.partition(".")
        if field:
            if section not in sections or field not in sections[section]:
                raise ConfigError(f"unknown override --{key}")
            sections[section][field] = value
        else:
            hits = [name for name, keys in sections.items() if key in keys]
            if not hits:
                raise ConfigError(f"unknown override --{key}")
            if len(hits) > 1:
                raise ConfigError(
                    f"override --{key} is ambiguous (sections {hits}); use --section.{key}=..."
                )
            sections[hits[0]][key] = value
    return RunSpec(sections)


def _resolve_sigma2(spec: RunSpec, family: str) -> float:
    raw = spec.get("policy", "sigma2").strip()
    if raw:
        return spec.get_float("policy", "sigma2")
    return 1.0 if family == "booster_tuning" else 0.25


def _noise_variance(spec: RunSpec) -> float | None:
    raw = spec.get("problem", "noise_variance").strip()
    return float(raw) if raw else None


def _policy_config(spec: RunSpec, family: str) -> PolicyConfig:
    return PolicyConfig(
        sigma2=_resolve_sigma2(spec, family),
        booster=spec.get_float("policy", "B"),
        booster_growth=spec.get_float("policy", "C"),
        tail_lift=spec.get_float("policy", "D"),
    )


def _outdir(spec: RunSpec) -> str:
    path = spec.get("run", "outdir")
    os.makedirs(path, exist_ok=True)
    return path


def _bar_class(policy_id: str) -> str:
    return POLICY_CLASSES.get(policy_id.partition(":")[0], "")


def cmd_run(spec: RunSpec) -> int:
    family = spec.get("problem", "family")
    k = spec.get_int("problem", "K")
    noise = _noise_variance(spec)
    horizon = spec.get_int("run", "T")
    trials = spec.get_int("run", "trials")
    base_seed = spec.get_int("run", "base_seed")
    stride = spec.get_int("run", "stride")
    workers = spec.get_int("run", "workers") or None
    policy_ids = spec.get_list("policies", "ids")
    if not policy_ids:
        raise ConfigError("field [policies] ids: at least one policy id required")
    base_config = _policy_config(spec, family)

    try:
        make_problem(family, k, noise)
        configs = [
            ExperimentConfig(
                family=family,
                n_arms=k,
                noise_variance=noise,
                policy=pid,
                policy_config=base_config,
                horizon=horizon,
                trials=trials,
                base_seed=base_seed,
                trajectory_stride=stride,
            )
            for pid in policy_ids
        ]
        for pid in policy_ids:
            parse_policy_id(pid, base_config)
    except ValueError as err:
        raise ConfigError(str(err)) from None

    outdir = _outdir(spec)
    summaries = []
    for config in configs:
        results = run_trials(config, workers)
        summary = summarize(config, results)
        summaries.append(summary)
        print(
            f"{config.policy}: mean={fmt(summary.mean_regret)} "
            f"std={fmt(summary.std_regret)} max={fmt(summary.max_regret)}"
        )
        safe = config.policy.replace(":", "_").replace("=", "")
        if spec.get_bool("run", "per_trial_csv"):
            write_trials_csv(results, os.path.join(outdir, f"trials_{safe}.csv"))
        if spec.get_bool("run", "trajectories"):
            write_trajectories_csv(results, os.path.join(outdir, f"trajectories_{safe}.csv"))

    write_summaries_csv(summaries, os.path.join(outdir, "summary.csv"))
    write_summaries_json(summaries, os.path.join(outdir, "summary.json"))
    if spec.get_bool("run", "svg"):
        svg = bar_chart(
            [s.policy for s in summaries],
            [s.mean_regret for s in summaries],
            [s.std_regret for s in summaries],
            [_bar_class(s.policy) for s in summaries],
            title=f"{family} K={k} T={horizon} ({trials} trials)",
        )
        with open(os.path.join(outdir, "summary.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)
    print(f"wrote {outdir}/summary.csv")
    return 0


def cmd_sweep_booster(spec: RunSpec) -> int:
    horizon = spec.get_int("run", "T")
    trials_raw = spec.get("booster", "trials").strip()
    trials = int(trials_raw) if trials_raw else spec.get_int("run", "trials")
    base_seed = spec.get_int("run", "base_seed")
    workers = spec.get_int("run", "workers") or None
    grid = spec.get_list("booster", "grid")
    if not grid:
        raise ConfigError("field [booster] grid: at least one B value required")
    base_config = _policy_config(spec, "booster_tuning")

    try:
        boosters = [float(b) for b in grid]
        configs = [
            ExperimentConfig(
                family="booster_tuning",
                n_arms=10,
                policy=f"msplus:B={fmt(b)}",
                policy_config=base_config,
                horizon=horizon,
                trials=trials,
                base_seed=base_seed,
            )
            for b in boosters
        ]
    except ValueError as err:
        raise ConfigError(str(err)) from None

    outdir = _outdir(spec)
    summaries = []
    for b, config in zip(boosters, configs):
        summary = summarize(config, run_trials(config, workers))
        summaries.append((b, summary))
        print(f"B={fmt(b)}: mean={fmt(summary.mean_regret)} std={fmt(summary.std_regret)}")

    with open(os.path.join(outdir, "booster.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["B", "mean", "std", "max"])
        for b, s in summaries:
            writer.writerow([fmt(b), fmt(s.mean_regret), fmt(s.std_regret), fmt(s.max_regret)])
    svg = line_chart(
        [f"{math.log2(b):.10g}" for b, _ in summaries],
        [s.mean_regret for _, s in summaries],
        [s.std_regret for _, s in summaries],
        title=f"booster sweep (T={horizon}, {trials} trials)",
        xlabel="log2(B)",
    )
    with open(os.path.join(outdir, "booster.svg"), "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {outdir}/booster.csv")
    return 0


def _replayed_state(instance, records) -> PolicyState:
    state = PolicyState.fresh(instance.k)
    for record in records:
        update(state, record.arm, record.reward)
    return state


def cmd_ope(spec: RunSpec) -> int:
    family = spec.get("problem", "family")
    k = spec.get_int("problem", "K")
    noise = _noise_variance(spec)
    logger = spec.get("ope", "logger")
    n_logs = spec.get_int("ope", "n_logs")
    horizon = spec.get_int("ope", "T")
    mc_samples = spec.get_int("ope", "mc_samples")
    base_seed = spec.get_int("run", "base_seed")
    targets_raw = spec.get_list("ope", "targets")
    if not targets_raw:
        raise ConfigError("field [ope] targets: at least one 1-indexed target arm required")
    sigma2 = _resolve_sigma2(spec, family)
    config = PolicyConfig(
        sigma2=sigma2,
        booster=spec.get_float("policy", "B"),
        booster_growth=spec.get_float("policy", "C"),
        tail_lift=spec.get_float("policy", "D"),
    )

    try:
        instance = make_problem(family, k, noise)
        parse_policy_id(logger, config)
        target_arms = [int(t) for t in targets_raw]
        for arm in target_arms:
            if not 1 <= arm <= k:
                raise ValueError(f"target arm {arm} outside 1..{k}")
    except ValueError as err:
        raise ConfigError(str(err)) from None

    logs = [
        ope.log_run(logger, instance, horizon, trial_seed(base_seed, i), config)
        for i in range(n_logs)
    ]

    rows = []
    for arm in target_arms:
        target = np.zeros(k)
        target[arm - 1] = 1.0
        estimates = np.array([ope.ips_value(log, target).value for log in logs])
        se = float(np.std(estimates, ddof=1) / np.sqrt(n_logs)) if n_logs > 1 else 0.0
        rows.append(
            {
                "target_arm": arm,
                "true_mean": float(instance.means[arm - 1]),
                "ips_mean": float(estimates.mean()),
                "ips_se": se,
                "n_logs": n_logs,
            }
        )
        print(
            f"arm {arm}: true={fmt(rows[-1]['true_mean'])} "
            f"ips={fmt(rows[-1]['ips_mean'])} se={fmt(se)}"
        )

    # Wall-clock contrast: reading off the closed-form probability versus
    # brute-force resampling for a policy without one (Thompson sampling).
    state = _replayed_state(instance, logs[0])
    reps = 200
    t0 = time.perf_counter()
    for _ in range(reps):
        ms_distribution(state, sigma2)
    closed_form_s = (time.perf_counter() - t0) / reps
    rng = np.random.Generator(np.random.PCG64(base_seed))
    t0 = time.perf_counter()
    ope.mc_propensity(lambda g: ts_sample(state, config, g), k, mc_samples, rng)
    mc_s = time.perf_counter() - t0
    timing = {
        "closed_form_seconds": closed_form_s,
        "mc_seconds": mc_s,
        "mc_samples": mc_samples,
        "speedup": mc_s / closed_form_s if closed_form_s > 0 else float("inf"),
    }
    print(f"closed-form propensity vs mc ({mc_samples} draws): {timing['speedup']:.0f}x faster")

    outdir = _outdir(spec)
    with open(os.path.join(outdir, "ope.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["target_arm", "true_mean", "ips_mean", "ips_se", "n_logs"])
        for row in rows:
            writer.writerow(
                [row["target_arm"], fmt(row["true_mean"]), fmt(row["ips_mean"]),
                 fmt(row["ips_se"]), row["n_logs"]]
            )
    payload = {"targets": round12(rows), "timing": timing, "logger": logger, "T": horizon}
    with open(os.path.join(outdir, "ope.json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {outdir}/ope.csv")
    return 0


def cmd_bounds(spec: RunSpec) -> int:
    family = spec.get("problem", "family")
    k = spec.get_int("problem", "K")
    noise = _noise_variance(spec)
    horizon = spec.get_int("run", "T")
    c = spec.get_float("bounds", "c")
    sigma2 = _resolve_sigma2(spec, family)
    try:
        instance = make_problem(family, k, noise)
        report = bounds_mod.bound_report(instance, sigma2, c, horizon)
    except ValueError as err:
        raise ConfigError(str(err)) from None

    payload = round12(report.to_dict())
    print(json.dumps(payload, indent=2, sort_keys=True))
    outdir = _outdir(spec)
    with open(os.path.join(outdir, "bounds.json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    keys = sorted(payload)
    with open(os.path.join(outdir, "bounds.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(keys)
        writer.writerow([fmt(payload[key]) for key in keys])
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep-booster": cmd_sweep_booster,
    "ope": cmd_ope,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msbandits",
        description="Bandit experiment harness with closed-form-propensity policies "
        f"(simulation backend: {engine.ACTIVE_BACKEND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run the configured policies on one problem and emit summaries"),
        ("sweep-booster", "sweep the msplus booster grid on the booster-tuning problem"),
        ("ope", "generate propensity-logged data and score point-mass targets with IPS"),
        ("bounds", "print and write the leading-term bound report for the problem"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-c", "--config", default=None, help="INI config file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        overrides = parse_overrides(extra)
        spec = load_spec(args.config, overrides)
        return COMMANDS[args.command](spec)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # runtime failure
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
