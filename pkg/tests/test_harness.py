import csv

import numpy as np
import pytest

from msbandits import engine
from msbandits.env import GAUSSIAN, ArmModel, BanditInstance
from msbandits.harness import (
    ExperimentConfig,
    run_experiment,
    run_trial,
    run_trials,
    summarize,
    sweep,
    trial_seed,
    write_summaries_csv,
    write_summaries_json,
    write_trials_csv,
)
from msbandits.policy import PolicyConfig


def config_of(policy="ms", family="gaussian_equal", k=2, horizon=500, trials=6,
              base_seed=71, stride=100):
    return ExperimentConfig(
        family=family, n_arms=k, policy=policy, horizon=horizon, trials=trials,
        base_seed=base_seed, policy_config=PolicyConfig(sigma2=0.25),
        trajectory_stride=stride,
    )


def test_config_validation():
    with pytest.raises(ValueError):
        config_of(horizon=2, k=2)
    with pytest.raises(ValueError):
        config_of(trials=0)


def test_trial_seed_is_a_fixed_function():
    assert trial_seed(71, 0) == trial_seed(71, 0)
    seeds = {trial_seed(71, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert trial_seed(71, 0) != trial_seed(72, 0)


def test_zero_gap_instance_has_zero_regret():
    instance = BanditInstance(tuple(ArmModel(GAUSSIAN, 0.5, 0.25) for _ in range(3)))
    for policy_id, kind in engine.KIND_BY_ID.items():
        out = engine.run_trial_core(
            kind, instance.means, instance.stds, False, instance.gaps,
            0.25, 8.0, 0.01, 0.01, 500, 500,
            np.random.Generator(np.random.PCG64(4)),
        )
        assert out.regret == 0.0, policy_id


def test_trial_regret_accounting_identity():
    for policy in ("ms", "msplus:B=8", "ucb1", "ts", "moss"):
        config = config_of(policy=policy, family="gaussian_linear", k=10, horizon=1500)
        for i in range(3):
            result = run_trial(config, i)
            instance = config.instance()
            assert int(result.pulls.sum()) == config.horizon
            assert result.final_regret == pytest.approx(
                float(np.dot(instance.gaps, result.pulls)), abs=1e-9
            )
            # round-robin initialization alone costs the sum of the gaps
            assert result.final_regret >= float(instance.gaps.sum()) - 1e-12


def test_trajectory_monotone_and_bounded():
    config = config_of(policy="tssg", family="gaussian_equal", k=10, horizon=1200)
    result = run_trial(config, 0)
    instance = config.instance()
    assert (np.diff(result.traj_regret) >= 0).all()
    assert (result.traj_regret <= result.traj_steps * instance.gaps.max() + 1e-12).all()
    assert result.traj_steps[-1] == config.horizon
    assert result.traj_regret[-1] == pytest.approx(result.final_regret, abs=1e-12)


def test_serial_and_parallel_runs_identical():
    config = config_of(policy="msplus:B=8", family="gaussian_equal", k=10,
                       horizon=800, trials=8)
    serial = run_trials(config, workers=1)
    parallel = run_trials(config, workers=8)
    assert [r.trial for r in parallel] == list(range(8))
    for a, b in zip(serial, parallel):
        assert a.trial == b.trial and a.seed == b.seed
        assert a.final_regret == b.final_regret
        assert np.array_equal(a.pulls, b.pulls)
        assert np.array_equal(a.traj_regret, b.traj_regret)


def test_single_trial_summary():
    config = config_of(trials=1)
    summary = run_experiment(config)
    assert summary.trials == 1
    assert summary.std_regret == 0.0
    assert summary.mean_regret == summary.max_regret


def test_summary_invariants_and_echo():
    config = config_of(policy="ucb1", trials=10)
    summary = run_experiment(config)
    assert summary.max_regret >= summary.mean_regret >= 0.0
    assert summary.std_regret >= 0.0
    assert summary.config["family"] == "gaussian_equal"
    assert summary.config["T"] == 500
    assert summary.policy == "ucb1"


def test_summary_matches_offline_recomputation(tmp_path):
    config = config_of(policy="ms", trials=12)
    results = run_trials(config)
    summary = summarize(config, results)
    path = tmp_path / "trials.csv"
    write_trials_csv(results, path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    regrets = np.array([float(r["final_regret"]) for r in rows])
    assert len(rows) == 12
    assert summary.mean_regret == pytest.approx(regrets.mean(), rel=1e-10)
    assert summary.std_regret == pytest.approx(regrets.std(ddof=1), rel=1e-10)
    assert summary.max_regret == pytest.approx(regrets.max(), rel=1e-10)
    assert [int(r["trial"]) for r in rows] == list(range(12))
    assert [int(r["seed"]) for r in rows] == [trial_seed(71, i) for i in range(12)]


def test_sweep_preserves_order_and_determinism():
    assert sweep([]) == []
    configs = [config_of(policy=f"msplus:B={b}", trials=3, horizon=400) for b in (2, 4, 8)]
    first = sweep(configs)
    second = sweep(configs)
    assert [s.policy for s in first] == ["msplus:B=2", "msplus:B=4", "msplus:B=8"]
    assert [s.mean_regret for s in first] == [s.mean_regret for s in second]
    twice = sweep([configs[0], configs[0]])
    assert twice[0] == twice[1]


def test_summary_file_outputs_are_stable(tmp_path):
    config = config_of(trials=4)
    summaries = [run_experiment(config), run_experiment(config_of(policy="ucb1", trials=4))]
    csv_path, json_path = tmp_path / "s.csv", tmp_path / "s.json"
    write_summaries_csv(summaries, csv_path)
    write_summaries_json(summaries, json_path)
    first = csv_path.read_bytes()
    write_summaries_csv(summaries, csv_path)
    assert csv_path.read_bytes() == first
    header = first.decode().splitlines()[0]
    assert header.startswith("policy,family,K,noise_variance,T,sigma2,trials")
    assert json_path.read_text().count('"policy"') == 2


def test_bandit_threads_env_cap(monkeypatch):
    from msbandits.harness import resolve_workers

    monkeypatch.setenv("BANDIT_THREADS", "2")
    assert resolve_workers(8) == 2
    monkeypatch.setenv("BANDIT_THREADS", "0")
    assert resolve_workers(8) == 8
    monkeypatch.delenv("BANDIT_THREADS")
    assert resolve_workers(3) == 3
    assert resolve_workers(None) >= 1


def test_trajectory_dump(tmp_path):
    config = config_of(policy="ms", trials=3, horizon=450, stride=100)
    results = run_trials(config)
    from msbandits.harness import write_trajectories_csv

    path = tmp_path / "traj.csv"
    write_trajectories_csv(results, path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    # 4 stored points per trial (100, 200, 300, 400) plus the final step 450
    assert len(rows) == 3 * 5
    assert rows[0]["trial"] == "0" and rows[0]["step"] == "100"
    assert rows[4]["step"] == "450"
    per_trial = [float(r["cum_regret"]) for r in rows[:5]]
    assert all(a <= b for a, b in zip(per_trial, per_trial[1:]))
