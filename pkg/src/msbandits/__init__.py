"""Maillard-sampling bandits: closed-form-propensity policies, baselines,
bound calculators, off-policy evaluation, and a seeded experiment harness."""

from .bounds import (
    BoundReport,
    asymptotic_rate,
    bound_report,
    minimax_envelope,
    ms_leading_term,
    msplus_leading_term,
)
from .engine import ACTIVE_BACKEND, available_backends
from .env import ArmModel, BanditInstance, make_problem, pull
from .harness import (
    ExperimentConfig,
    ExperimentSummary,
    TrialResult,
    run_experiment,
    run_trial,
    sweep,
    trial_seed,
)
from .ope import IpsEstimate, LogRecord, ips_value, log_run, mc_propensity
from .policy import (
    ActionDistribution,
    EmpiricalGaps,
    PolicyConfig,
    PolicyState,
    aoucb_index,
    empirical_gaps,
    imed_index,
    moss_index,
    ms_distribution,
    msplus_distribution,
    parse_policy_id,
    sample,
    ts_sample,
    ts_two_arm_probability,
    tssg_sample,
    ucb1_index,
    update,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND",
    "ActionDistribution",
    "ArmModel",
    "BanditInstance",
    "BoundReport",
    "EmpiricalGaps",
    "ExperimentConfig",
    "ExperimentSummary",
    "IpsEstimate",
    "LogRecord",
    "PolicyConfig",
    "PolicyState",
    "TrialResult",
    "aoucb_index",
    "asymptotic_rate",
    "available_backends",
    "bound_report",
    "empirical_gaps",
    "imed_index",
    "ips_value",
    "log_run",
    "make_problem",
    "mc_propensity",
    "minimax_envelope",
    "moss_index",
    "ms_distribution",
    "ms_leading_term",
    "msplus_distribution",
    "msplus_leading_term",
    "parse_policy_id",
    "pull",
    "run_experiment",
    "run_trial",
    "sample",
    "sweep",
    "trial_seed",
    "ts_sample",
    "ts_two_arm_probability",
    "tssg_sample",
    "ucb1_index",
    "update",
]
