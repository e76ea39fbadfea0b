# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of the pure-Python trial loop in ``_fallback``.

Same draw protocol, same operation order, same libm calls; a trial run here
is bit-identical to one run by the fallback on the same PCG64 stream.
"""
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport INFINITY, exp, log, log1p, sqrt

import numpy as np

from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_normal

cdef const char *CAPSULE_NAME = "BitGenerator"


cdef bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("expected a numpy Generator backed by a BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


def rng_probe(object gen, Py_ssize_t n):
    """Draw ``n`` uniforms then ``n`` normals through the C API.

    Exists so the tests can assert stream parity with Generator.random /
    Generator.standard_normal.
    """
    cdef bitgen_t *rng = _bitgen(gen)
    cdef double[::1] u = np.empty(n, dtype=np.float64)
    cdef double[::1] z = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    with gen.bit_generator.lock, nogil:
        for i in range(n):
            u[i] = rng.next_double(rng.state)
        for i in range(n):
            z[i] = random_standard_normal(rng)
    return np.asarray(u), np.asarray(z)


def run_trial(int kind, double[::1] means, double[::1] stds, int bernoulli,
              double[::1] gaps, double sigma2, double booster, double growth,
              double lift, long long moss_horizon, long long n_steps,
              object gen, long long stride, int record_log):
    cdef Py_ssize_t k = means.shape[0]
    cdef bitgen_t *rng = _bitgen(gen)

    counts_arr = np.zeros(k, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef double[::1] emp = np.zeros(k, dtype=np.float64)
    cdef double[::1] w = np.zeros(k, dtype=np.float64)

    cdef long long n_traj = 0
    if stride > 0:
        n_traj = n_steps // stride + (1 if n_steps % stride else 0)
    traj_steps_arr = np.zeros(n_traj, dtype=np.int64)
    traj_regret_arr = np.zeros(n_traj, dtype=np.float64)
    cdef long long[::1] traj_steps = traj_steps_arr
    cdef double[::1] traj_regret = traj_regret_arr

    log_arms_arr = np.zeros(n_steps if record_log else 1, dtype=np.int64)
    log_rewards_arr = np.zeros(n_steps if record_log else 1, dtype=np.float64)
    log_props_arr = np.zeros(n_steps if record_log else 1, dtype=np.float64)
    cdef long long[::1] log_arms = log_arms_arr
    cdef double[::1] log_rewards = log_rewards_arr
    cdef double[::1] log_props = log_props_arr

    cdef double inv2s2 = 1.0 / (2.0 * sigma2)
    cdef double regret = 0.0
    cdef long long t = 0, t1 = 0, traj_i = 0
    cdef Py_ssize_t a, arm
    cdef double prop, mu_max, e_max, e, d, x, s, u, cum
    cdef double lt, l2, num, best, idx, la, four_s2, vs2, theta, r

    with gen.bit_generator.lock, nogil:
        for t1 in range(1, n_steps + 1):
            prop = 1.0
            if t1 <= <long long>k:
                arm = <Py_ssize_t>(t1 - 1)
            elif kind == 0 or kind == 1:  # ms / msplus
                mu_max = emp[0]
                for a in range(1, k):
                    if emp[a] > mu_max:
                        mu_max = emp[a]
                if kind == 0:
                    e_max = -INFINITY
                    for a in range(k):
                        d = mu_max - emp[a]
                        e = -((<double>counts[a]) * d * d * inv2s2)
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
                            w[a] = booster * (1.0 + growth * log1p(log((<double>t1) / (<double>counts[a]))))
                        else:
                            d = mu_max - emp[a]
                            x = (<double>counts[a]) * d * d * inv2s2
                            w[a] = exp(-x + log1p(lift * x))
                        s += w[a]
                u = rng.next_double(rng.state)
                cum = 0.0
                arm = k - 1
                for a in range(k):
                    cum += w[a] / s
                    if u < cum:
                        arm = a
                        break
                prop = w[arm] / s
            elif kind == 2 or kind == 3:  # ucb1 / aoucb
                lt = log(<double>t)
                if kind == 2:
                    num = 2.0 * sigma2 * lt
                else:
                    l2 = lt * lt
                    if l2 < 1.0:
                        l2 = 1.0
                    num = 2.0 * sigma2 * log(1.0 + (<double>t) * l2)
                best = -INFINITY
                arm = 0
                for a in range(k):
                    idx = emp[a] + sqrt(num / (<double>counts[a]))
                    if idx > best:
                        best = idx
                        arm = a
            elif kind == 4:  # moss
                four_s2 = 4.0 * sigma2
                best = -INFINITY
                arm = 0
                for a in range(k):
                    la = log((<double>moss_horizon) / (<double>(k * counts[a])))
                    if la < 0.0:
                        la = 0.0
                    idx = emp[a] + sqrt(four_s2 * la / (<double>counts[a]))
                    if idx > best:
                        best = idx
                        arm = a
            elif kind == 5:  # imed (argmin)
                mu_max = emp[0]
                for a in range(1, k):
                    if emp[a] > mu_max:
                        mu_max = emp[a]
                best = INFINITY
                arm = 0
                for a in range(k):
                    d = mu_max - emp[a]
                    idx = (<double>counts[a]) * d * d * inv2s2 + log(<double>counts[a])
                    if idx < best:
                        best = idx
                        arm = a
            else:  # ts / tssg
                vs2 = sigma2 if kind == 6 else 4.0 * sigma2
                best = -INFINITY
                arm = 0
                for a in range(k):
                    theta = emp[a] + sqrt(vs2 / (<double>counts[a])) * random_standard_normal(rng)
                    if theta > best:
                        best = theta
                        arm = a

            if bernoulli:
                r = 1.0 if rng.next_double(rng.state) < means[arm] else 0.0
            else:
                r = means[arm] + stds[arm] * random_standard_normal(rng)

            counts[arm] += 1
            emp[arm] += (r - emp[arm]) / (<double>counts[arm])
            t += 1
            regret += gaps[arm]

            if record_log:
                log_arms[t1 - 1] = arm
                log_rewards[t1 - 1] = r
                log_props[t1 - 1] = prop
            if stride > 0 and (t1 % stride == 0 or t1 == n_steps):
                traj_steps[traj_i] = t1
                traj_regret[traj_i] = regret
                traj_i += 1

    if record_log:
        return (counts_arr, regret, traj_steps_arr, traj_regret_arr,
                log_arms_arr, log_rewards_arr, log_props_arr)
    return counts_arr, regret, traj_steps_arr, traj_regret_arr, None, None, None
