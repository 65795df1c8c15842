"""Numba-compiled log-posteriors and the Metropolis chain driver.

These mirror the pure-python reference likelihoods in pocrm.py / blrm.py;
tests assert agreement to 1e-10. Keep both sides in sync.
"""

from __future__ import annotations

import numpy as np
from numba import njit

CELL_FLOOR = 1e-300


@njit(cache=True)
def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True)
def _cell_loglik(g_a, g_t, y_a, y_t, tanh_half_psi):
    pa = g_a if y_a == 1 else 1.0 - g_a
    pt = g_t if y_t == 1 else 1.0 - g_t
    corr = g_a * (1.0 - g_a) * g_t * (1.0 - g_t) * tanh_half_psi
    cell = pa * pt + corr if y_a == y_t else pa * pt - corr
    if cell < CELL_FLOOR:
        cell = CELL_FLOOR
    return np.log(cell)


@njit(cache=True)
def pocrm_logpost(theta, data):
    """Joint two-parameter logistic fit, theta = (b0a, log b1a, b0t, log b1t, psi).

    data = (x_a, x_t, w_a, w_t, y_a, y_t, prior_mean, prior_var); x are the
    per-patient skeleton values under the selected orderings.
    """
    x_a, x_t, w_a, w_t, y_a, y_t, pm, pv = data
    lp = 0.0
    for c in range(theta.shape[0]):
        d = theta[c] - pm[c]
        lp -= d * d / (2.0 * pv[c])
    b0a, b1a = theta[0], np.exp(theta[1])
    b0t, b1t = theta[2], np.exp(theta[3])
    th = np.tanh(theta[4] / 2.0)
    for l in range(x_a.shape[0]):
        g_a = w_a[l] * _sigmoid(b0a + b1a * x_a[l])
        g_t = w_t[l] * _sigmoid(b0t + b1t * x_t[l])
        lp += _cell_loglik(g_a, g_t, y_a[l], y_t[l], th)
    return lp


@njit(cache=True)
def pocrm_tox_logpost(theta, data):
    """Toxicity-only two-parameter logistic fit, theta = (b0t, log b1t)."""
    x_t, w_t, y_t, pm, pv = data
    lp = 0.0
    for c in range(theta.shape[0]):
        d = theta[c] - pm[c]
        lp -= d * d / (2.0 * pv[c])
    b0t, b1t = theta[0], np.exp(theta[1])
    for l in range(x_t.shape[0]):
        g = w_t[l] * _sigmoid(b0t + b1t * x_t[l])
        if y_t[l] == 1:
            g = g if g > CELL_FLOOR else CELL_FLOOR
            lp += np.log(g)
        else:
            q = 1.0 - g
            q = q if q > CELL_FLOOR else CELL_FLOOR
            lp += np.log(q)
    return lp


@njit(cache=True)
def _blrm_combo_logodds(b0_1, b1_1, b0_2, b1_2, eta, d1, d2):
    lo1 = b0_1 + b1_1 * d1
    lo2 = b0_2 + b1_2 * d2
    return np.logaddexp(np.logaddexp(lo1, lo2), lo1 + lo2) + eta * d1 * d2


@njit(cache=True)
def blrm_logpost(theta, data):
    """Dual-agent odds-linked logistic fit.

    theta = (b0_w1t, log b1_w1t, b0_w2t, log b1_w2t,
             b0_w1a, log b1_w1a, b0_w2a, log b1_w2a, eta_t, eta_a, psi);
    eta coordinates are kept nonnegative by the sampler's reflection.
    data = (d1s, d2s, combo_idx, w_a, w_t, y_a, y_t, prior_mean, prior_var).
    """
    d1s, d2s, combo_idx, w_a, w_t, y_a, y_t, pm, pv = data
    lp = 0.0
    for c in range(theta.shape[0]):
        d = theta[c] - pm[c]
        lp -= d * d / (2.0 * pv[c])
    nc = d1s.shape[0]
    p_t = np.empty(nc)
    p_a = np.empty(nc)
    eta_t, eta_a = theta[8], theta[9]
    for c in range(nc):
        p_t[c] = _sigmoid(
            _blrm_combo_logodds(
                theta[0], np.exp(theta[1]), theta[2], np.exp(theta[3]),
                eta_t, d1s[c], d2s[c],
            )
        )
        p_a[c] = _sigmoid(
            _blrm_combo_logodds(
                theta[4], np.exp(theta[5]), theta[6], np.exp(theta[7]),
                eta_a, d1s[c], d2s[c],
            )
        )
    th = np.tanh(theta[10] / 2.0)
    for l in range(combo_idx.shape[0]):
        g_a = w_a[l] * p_a[combo_idx[l]]
        g_t = w_t[l] * p_t[combo_idx[l]]
        lp += _cell_loglik(g_a, g_t, y_a[l], y_t[l], th)
    return lp


@njit(cache=True)
def blrm_tox_logpost(theta, data):
    """Toxicity-only half of the dual-agent model, theta = (4 betas, eta_t)."""
    d1s, d2s, combo_idx, w_t, y_t, pm, pv = data
    lp = 0.0
    for c in range(theta.shape[0]):
        d = theta[c] - pm[c]
        lp -= d * d / (2.0 * pv[c])
    nc = d1s.shape[0]
    p_t = np.empty(nc)
    for c in range(nc):
        p_t[c] = _sigmoid(
            _blrm_combo_logodds(
                theta[0], np.exp(theta[1]), theta[2], np.exp(theta[3]),
                theta[4], d1s[c], d2s[c],
            )
        )
    for l in range(combo_idx.shape[0]):
        g = w_t[l] * p_t[combo_idx[l]]
        if y_t[l] == 1:
            g = g if g > CELL_FLOOR else CELL_FLOOR
            lp += np.log(g)
        else:
            q = 1.0 - g
            q = q if q > CELL_FLOOR else CELL_FLOOR
            lp += np.log(q)
    return lp


_DRIVER_CACHE = {}


def get_chain_driver(logpost):
    """Compiled componentwise RWM driver specialized to one log-posterior.

    Same arithmetic as sampler._run_chain_python; proposal noise and
    acceptance uniforms come pre-drawn so the random stream is independent of
    the accept/reject path.
    """
    if logpost in _DRIVER_CACHE:
        return _DRIVER_CACHE[logpost]

    @njit(cache=False)
    def driver(theta0, data, z, u, scales0, reflect, burn, adapt_window, target):
        total, k = z.shape
        theta = theta0.copy()
        ls = np.log(scales0)
        lp = logpost(theta, data)
        keep = total - burn
        draws = np.empty((keep, k))
        acc_post = np.zeros(k)
        acc_win = np.zeros(k)
        batch = 0
        for t in range(total):
            for c in range(k):
                old = theta[c]
                prop = old + np.exp(ls[c]) * z[t, c]
                if reflect[c]:
                    prop = abs(prop)
                theta[c] = prop
                lp_new = logpost(theta, data)
                if np.log(u[t, c]) < lp_new - lp:
                    lp = lp_new
                    acc_win[c] += 1.0
                    if t >= burn:
                        acc_post[c] += 1.0
                else:
                    theta[c] = old
            if t < burn and (t + 1) % adapt_window == 0:
                batch += 1
                step = min(1.0, 4.0 / np.sqrt(batch))
                for c in range(k):
                    ls[c] += step * (acc_win[c] / adapt_window - target)
                    acc_win[c] = 0.0
            if t >= burn:
                for c in range(k):
                    draws[t - burn, c] = theta[c]
        return draws, acc_post / keep, np.exp(ls)

    _DRIVER_CACHE[logpost] = driver
    return driver
