import math

import numpy as np
import pytest

from msbandits.env import (
    BERNOULLI,
    GAUSSIAN,
    ArmModel,
    BanditInstance,
    make_problem,
    pull,
)

ALL_CATALOG = [
    ("gaussian_linear", 10),
    ("gaussian_linear", 100),
    ("gaussian_equal", 2),
    ("gaussian_equal", 10),
    ("gaussian_equal", 100),
    ("bernoulli_linear", 10),
    ("bernoulli_linear", 100),
    ("bernoulli_equal", 2),
    ("bernoulli_equal", 10),
    ("bernoulli_equal", 100),
    ("booster_tuning", 10),
]


def test_gaussian_linear_means():
    inst = make_problem("gaussian_linear", 10, 0.25)
    expected = [1.0 - i / 10 for i in range(1, 11)]
    assert np.array_equal(inst.means, np.array(expected))
    assert inst.arms[0].variance == 0.25


def test_bernoulli_equal_two_arms():
    inst = make_problem("bernoulli_equal", 2)
    assert np.array_equal(inst.means, np.array([0.1, 0.05]))
    assert np.array_equal(inst.gaps, np.array([0.0, 0.05]))


def test_gaussian_equal_two_arm_gaps():
    inst = make_problem("gaussian_equal", 2, 0.25)
    assert np.array_equal(inst.gaps, np.array([0.0, 0.5]))


def test_booster_tuning_pins_variance():
    inst = make_problem("booster_tuning", 10)
    assert all(arm.variance == 1.0 for arm in inst.arms)
    assert np.array_equal(inst.means, make_problem("gaussian_linear", 10).means)
    with pytest.raises(ValueError):
        make_problem("booster_tuning", 10, 0.25)
    with pytest.raises(ValueError):
        make_problem("booster_tuning", 100)


@pytest.mark.parametrize("family,k", [("gaussian_equal", 3), ("gaussian_linear", 2),
                                      ("bernoulli_equal", 50), ("bernoulli_linear", 7)])
def test_unsupported_family_k_pairs(family, k):
    with pytest.raises(ValueError):
        make_problem(family, k)


def test_unknown_family():
    with pytest.raises(ValueError):
        make_problem("cauchy_equal", 10)


def test_arm_model_invariants():
    with pytest.raises(ValueError):
        ArmModel(BERNOULLI, 1.5)
    with pytest.raises(ValueError):
        ArmModel(BERNOULLI, -0.1)
    with pytest.raises(ValueError):
        ArmModel(GAUSSIAN, 0.5, 0.0)
    with pytest.raises(ValueError):
        ArmModel("poisson", 0.5)
    with pytest.raises(ValueError):
        make_problem("gaussian_equal", 10, -1.0)


@pytest.mark.parametrize("family,k", ALL_CATALOG)
def test_gap_invariants(family, k):
    inst = make_problem(family, k)
    assert inst.k == k
    assert inst.gaps.min() == 0.0
    assert (inst.gaps >= 0.0).all()
    assert inst.gaps[inst.best_arm] == 0.0
    assert inst.best_arm == int(np.argmax(inst.means))


def test_variance_bound():
    assert ArmModel(GAUSSIAN, 0.0, 2.0).variance_bound == 2.0
    assert ArmModel(BERNOULLI, 0.3).variance_bound == 0.25


def test_needs_two_arms():
    with pytest.raises(ValueError):
        BanditInstance((ArmModel(GAUSSIAN, 0.0, 1.0),))


def test_pull_degenerate_bernoulli_always_one():
    inst = BanditInstance((ArmModel(BERNOULLI, 1.0), ArmModel(BERNOULLI, 0.5)))
    rng = np.random.default_rng(0)
    assert all(pull(inst, 0, rng) == 1.0 for _ in range(200))


def test_pull_out_of_range():
    inst = make_problem("gaussian_equal", 2)
    with pytest.raises(IndexError):
        pull(inst, 2, np.random.default_rng(0))
    with pytest.raises(IndexError):
        pull(inst, -1, np.random.default_rng(0))


def test_pull_deterministic_given_stream():
    inst = make_problem("gaussian_linear", 10)
    a = [pull(inst, 3, np.random.default_rng(11)) for _ in range(5)]
    b = [pull(inst, 3, np.random.default_rng(11)) for _ in range(5)]
    assert a[0] == b[0]
    rng1, rng2 = np.random.default_rng(11), np.random.default_rng(11)
    assert [pull(inst, 3, rng1) for _ in range(20)] == [pull(inst, 3, rng2) for _ in range(20)]


def test_pull_empirical_mean_gaussian():
    # central-limit bound: 3 * sqrt(var / n) for var=1, n=1e6 is 0.003
    inst = BanditInstance((ArmModel(GAUSSIAN, 0.5, 1.0), ArmModel(GAUSSIAN, 0.0, 1.0)))
    rng = np.random.default_rng(2024)
    n = 10**6
    total = 0.0
    for _ in range(n):
        total += pull(inst, 0, rng)
    assert abs(total / n - 0.5) <= 3.0 * math.sqrt(1.0 / n)


@pytest.mark.parametrize("family,k,arm", [("bernoulli_equal", 2, 1), ("gaussian_equal", 2, 0)])
def test_pull_empirical_mean_catalog(family, k, arm):
    inst = make_problem(family, k)
    rng = np.random.default_rng(7)
    n = 40_000
    mean = sum(pull(inst, arm, rng) for _ in range(n)) / n
    bound = 3.0 * math.sqrt(inst.arms[arm].variance_bound / n)
    assert abs(mean - inst.arms[arm].mean) <= bound
