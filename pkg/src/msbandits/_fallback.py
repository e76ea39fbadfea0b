"""Pure-Python twin of the compiled trial loop.

Scalar libm arithmetic, written so every operation happens in the same order
as in ``_kernel.pyx``; the two backends must stay bit-identical. Constants 0-7
for ``kind`` follow ``engine``.
"""
from __future__ import annotations

from math import exp, log, log1p, sqrt

import numpy as np


def run_trial(
    kind,
    means,
    stds,
    bernoulli,
    gaps,
    sigma2,
    booster,
    growth,
    lift,
    moss_horizon,
    n_steps,
    gen,
    stride,
    record_log,
):
    k = len(means)
    mu = means.tolist()
    sd = stds.tolist()
    gap = gaps.tolist()
    counts = [0] * k
    emp = [0.0] * k
    w = [0.0] * k
    t = 0
    regret = 0.0

    n_traj = (n_steps // stride + (1 if n_steps % stride else 0)) if stride > 0 else 0
    traj_steps = np.zeros(n_traj, dtype=np.int64)
    traj_regret = np.zeros(n_traj, dtype=np.float64)
    traj_i = 0
    if record_log:
        log_arms = np.zeros(n_steps, dtype=np.int64)
        log_rewards = np.zeros(n_steps, dtype=np.float64)
        log_props = np.zeros(n_steps, dtype=np.float64)
    else:
        log_arms = log_rewards = log_props = None

    uniform = gen.random
    normal = gen.standard_normal
    inv2s2 = 1.0 / (2.0 * sigma2)

    for t1 in range(1, n_steps + 1):
        prop = 1.0
        if t1 <= k:
            arm = t1 - 1
        elif kind == 0 or kind == 1:  # ms / msplus
            mu_max = emp[0]
            for a in range(1, k):
                if emp[a] > mu_max:
                    mu_max = emp[a]
            if kind == 0:
                e_max = -np.inf
                for a in range(k):
                    d = mu_max - emp[a]
                    e = -(counts[a] * d * d * inv2s2)
                    w[a] = e
                    if e > e_max:
                        e_max = e
                s = 0.0
                for a in range(k):
                    w[a] = exp(w[a] - e_max)
                    s += w[a]
            else:
                s = 0.0
                for a in range(k):
                    if emp[a] == mu_max:
                        w[a] = booster * (1.0 + growth * log1p(log(t1 / counts[a])))
                    else:
                        d = mu_max - emp[a]
                        x = counts[a] * d * d * inv2s2
                        w[a] = exp(-x + log1p(lift * x))
                    s += w[a]
            u = uniform()
            cum = 0.0
            arm = k - 1
            for a in range(k):
                cum += w[a] / s
                if u < cum:
                    arm = a
                    break
            prop = w[arm] / s
        elif kind == 2 or kind == 3:  # ucb1 / aoucb
            lt = log(t)
            if kind == 2:
                num = 2.0 * sigma2 * lt
            else:
                l2 = lt * lt
                if l2 < 1.0:
                    l2 = 1.0
                num = 2.0 * sigma2 * log(1.0 + t * l2)
            best = -np.inf
            arm = 0
            for a in range(k):
                idx = emp[a] + sqrt(num / counts[a])
                if idx > best:
                    best = idx
                    arm = a
        elif kind == 4:  # moss
            four_s2 = 4.0 * sigma2
            best = -np.inf
            arm = 0
            for a in range(k):
                la = log(moss_horizon / (k * counts[a]))
                if la < 0.0:
                    la = 0.0
                idx = emp[a] + sqrt(four_s2 * la / counts[a])
                if idx > best:
                    best = idx
                    arm = a
        elif kind == 5:  # imed (argmin)
            mu_max = emp[0]
            for a in range(1, k):
                if emp[a] > mu_max:
                    mu_max = emp[a]
            best = np.inf
            arm = 0
            for a in range(k):
                d = mu_max - emp[a]
                idx = counts[a] * d * d * inv2s2 + log(counts[a])
                if idx < best:
                    best = idx
                    arm = a
        else:  # ts / tssg
            vs2 = sigma2 if kind == 6 else 4.0 * sigma2
            z = normal(k)
            best = -np.inf
            arm = 0
            for a in range(k):
                theta = emp[a] + sqrt(vs2 / counts[a]) * z[a]
                if theta > best:
                    best = theta
                    arm = a

        if bernoulli:
            r = 1.0 if uniform() < mu[arm] else 0.0
        else:
            r = mu[arm] + sd[arm] * normal()

        counts[arm] += 1
        emp[arm] += (r - emp[arm]) / counts[arm]
        t += 1
        regret += gap[arm]

        if record_log:
            log_arms[t1 - 1] = arm
            log_rewards[t1 - 1] = r
            log_props[t1 - 1] = prop
        if stride > 0 and (t1 % stride == 0 or t1 == n_steps):
            traj_steps[traj_i] = t1
            traj_regret[traj_i] = regret
            traj_i += 1

    pulls = np.array(counts, dtype=np.int64)
    return pulls, regret, traj_steps, traj_regret, log_arms, log_rewards, log_props
