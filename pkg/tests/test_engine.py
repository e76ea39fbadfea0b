import importlib

import numpy as np
import pytest

from msbandits import engine
from msbandits.env import make_problem, pull
from msbandits.policy import (
    PolicyConfig,
    PolicyState,
    aoucb_index,
    argmax_first,
    argmin_first,
    imed_index,
    moss_index,
    ms_distribution,
    msplus_distribution,
    sample,
    ts_sample,
    tssg_sample,
    ucb1_index,
    update,
)

HAVE_KERNEL = "cython" in engine.available_backends()

CONFIG = PolicyConfig(sigma2=0.25, booster=8.0, booster_growth=0.01, tail_lift=0.01)


def run(instance, policy_id, n_steps, seed, backend, stride=0, record_log=False):
    return engine.run_trial_core(
        engine.KIND_BY_ID[policy_id],
        instance.means,
        instance.stds,
        instance.is_bernoulli,
        instance.gaps,
        CONFIG.sigma2,
        CONFIG.booster,
        CONFIG.booster_growth,
        CONFIG.tail_lift,
        n_steps,
        n_steps,
        np.random.Generator(np.random.PCG64(seed)),
        stride=stride,
        record_log=record_log,
        backend=backend,
    )


def replay_trial(instance, policy_id, n_steps, seed):
    """Independent step-by-step reconstruction through the public API."""
    gen = np.random.Generator(np.random.PCG64(seed))
    config = CONFIG if policy_id != "moss" else PolicyConfig(
        sigma2=CONFIG.sigma2, horizon=n_steps
    )
    state = PolicyState.fresh(instance.k)
    regret = 0.0
    for t1 in range(1, n_steps + 1):
        if t1 <= instance.k:
            arm = t1 - 1
        elif policy_id == "ms":
            arm = sample(ms_distribution(state, config.sigma2), gen)
        elif policy_id == "msplus":
            arm = sample(msplus_distribution(state, config), gen)
        elif policy_id == "ucb1":
            arm = argmax_first(ucb1_index(state, config))
        elif policy_id == "aoucb":
            arm = argmax_first(aoucb_index(state, config))
        elif policy_id == "moss":
            arm = argmax_first(moss_index(state, config))
        elif policy_id == "imed":
            arm = argmin_first(imed_index(state, config))
        elif policy_id == "ts":
            arm = ts_sample(state, config, gen)
        else:
            arm = tssg_sample(state, config, gen)
        reward = pull(instance, arm, gen)
        update(state, arm, reward)
        regret += float(instance.gaps[arm])
    return state.counts.copy(), regret


@pytest.mark.skipif(not HAVE_KERNEL, reason="compiled kernel not built")
def test_rng_stream_parity_with_generator():
    from msbandits import _kernel

    g1 = np.random.Generator(np.random.PCG64(42))
    g2 = np.random.Generator(np.random.PCG64(42))
    uniforms, normals = _kernel.rng_probe(g1, 2000)
    assert np.array_equal(uniforms, np.array([g2.random() for _ in range(2000)]))
    assert np.array_equal(normals, np.array([g2.standard_normal() for _ in range(2000)]))


@pytest.mark.skipif(not HAVE_KERNEL, reason="compiled kernel not built")
@pytest.mark.parametrize("family,k", [("gaussian_equal", 2), ("gaussian_linear", 10),
                                      ("bernoulli_equal", 10), ("bernoulli_linear", 100)])
@pytest.mark.parametrize("policy_id", engine.KIND_BY_ID)
def test_backends_bit_identical(family, k, policy_id):
    instance = make_problem(family, k)
    a = run(instance, policy_id, 2000, 99, "cython", stride=50, record_log=True)
    b = run(instance, policy_id, 2000, 99, "python", stride=50, record_log=True)
    assert np.array_equal(a.pulls, b.pulls)
    assert a.regret == b.regret
    assert np.array_equal(a.traj_steps, b.traj_steps)
    assert np.array_equal(a.traj_regret, b.traj_regret)
    assert np.array_equal(a.arms, b.arms)
    assert np.array_equal(a.rewards, b.rewards)
    assert np.array_equal(a.propensities, b.propensities)


@pytest.mark.parametrize("policy_id", engine.KIND_BY_ID)
def test_engine_matches_public_api_replay(policy_id):
    # gaps between index values are continuous on Gaussian problems, so the
    # replayed decision sequence must coincide exactly
    instance = make_problem("gaussian_linear", 10)
    out = run(instance, policy_id, 1500, 7, None)
    pulls, regret = replay_trial(instance, policy_id, 1500, 7)
    assert np.array_equal(out.pulls, pulls)
    assert out.regret == pytest.approx(regret, abs=1e-9)


def test_engine_replay_bernoulli_closed_form_policies():
    instance = make_problem("bernoulli_equal", 10)
    for policy_id in ("ms", "msplus"):
        out = run(instance, policy_id, 1200, 3, None)
        pulls, regret = replay_trial(instance, policy_id, 1200, 3)
        assert np.array_equal(out.pulls, pulls)
        assert out.regret == pytest.approx(regret, abs=1e-9)


def test_same_seed_same_output():
    instance = make_problem("gaussian_equal", 10)
    a = run(instance, "ms", 3000, 5, None, stride=100)
    b = run(instance, "ms", 3000, 5, None, stride=100)
    assert np.array_equal(a.pulls, b.pulls) and a.regret == b.regret
    assert np.array_equal(a.traj_regret, b.traj_regret)


def test_pull_accounting_and_trajectory_shape():
    instance = make_problem("gaussian_equal", 10)
    out = run(instance, "ucb1", 2500, 1, None, stride=100)
    assert int(out.pulls.sum()) == 2500
    assert list(out.traj_steps[:3]) == [100, 200, 300]
    assert out.traj_steps[-1] == 2500
    assert (np.diff(out.traj_regret) >= 0).all()
    # stride that does not divide the horizon still records the final step
    out = run(instance, "ucb1", 2513, 1, None, stride=100)
    assert out.traj_steps[-1] == 2513 and len(out.traj_steps) == 26


def test_record_log_propensities():
    instance = make_problem("gaussian_equal", 2)
    out = run(instance, "ms", 400, 11, None, record_log=True)
    assert (out.propensities[: instance.k] == 1.0).all()
    assert (out.propensities[instance.k:] > 0.0).all()
    assert (out.propensities <= 1.0).all()
    # index policies carry placeholder propensity 1
    out = run(instance, "ucb1", 400, 11, None, record_log=True)
    assert (out.propensities == 1.0).all()


def test_moss_requires_horizon():
    instance = make_problem("gaussian_equal", 2)
    with pytest.raises(ValueError):
        engine.run_trial_core(
            engine.MOSS, instance.means, instance.stds, False, instance.gaps,
            0.25, 8.0, 0.01, 0.01, 0, 100,
            np.random.Generator(np.random.PCG64(0)),
        )


def test_backend_selection_env_var(monkeypatch):
    monkeypatch.setenv("BANDIT_PURE_PYTHON", "1")
    importlib.reload(engine)
    try:
        assert engine.ACTIVE_BACKEND == "python"
    finally:
        monkeypatch.delenv("BANDIT_PURE_PYTHON")
        importlib.reload(engine)
    assert engine.ACTIVE_BACKEND == ("cython" if HAVE_KERNEL else "python")


def test_unknown_backend_rejected():
    instance = make_problem("gaussian_equal", 2)
    with pytest.raises(ValueError):
        run(instance, "ms", 100, 0, "fortran")
