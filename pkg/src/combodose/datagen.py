"""Correlated bivariate-lognormal event-time generation.

Each combo/endpoint gets lognormal parameters solved so that the event
probability at one cycle and at the end of the window match the scenario's
cycle pattern exactly. Log-scale correlation between the toxicity and
activity times is fixed at -1/2 (covariance -sigma_t*sigma_a/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtri

__all__ = ["LognormalParams", "solve_lognormal", "scenario_params", "generate_patient", "RHO"]

RHO = -0.5
_P_CLAMP = 1.0 - 1e-12


def solve_lognormal(p_window: float, p_cycle1: float, tau: float):
    """(mu, sigma) with P(t <= 1) = p_cycle1 and P(t <= tau) = p_window.

    Returns None for p_window <= 0 (the "never" sentinel). Probabilities at
    1 are clamped just below it. With tau == 1 the two constraints coincide;
    sigma is then fixed at 1 and only the window quantile is matched.
    """
    if p_window <= 0.0:
        return None
    p_window = min(p_window, _P_CLAMP)
    p_cycle1 = min(p_cycle1, _P_CLAMP)
    if tau == 1:
        return (-ndtri(p_window), 1.0)
    if not 0.0 < p_cycle1 < p_window:
        raise ValueError(
            f"need 0 < p_cycle1 < p_window, got ({p_cycle1}, {p_window})"
        )
    z1 = ndtri(p_cycle1)
    z_tau = ndtri(p_window)
    sigma = np.log(tau) / (z_tau - z1)
    mu = -sigma * z1
    return (float(mu), float(sigma))


@dataclass(frozen=True)
class LognormalParams:
    """Per-combo log-scale parameters; None marks a never-occurring event."""

    tox: Optional[tuple]  # (mu, sigma)
    act: Optional[tuple]
    rho: float = RHO


def scenario_params(scenario) -> dict:
    """Solve lognormal parameters for every combo of a scenario.

    Toxicity concentrates ``tox_cycle1_fraction`` of the window probability
    in cycle 1; activity is split equally across cycles, so cycle 1 carries
    p/tau. The two-parameter family can match only these two quantiles; the
    mid-window behaviour is whatever the lognormal implies.
    """
    tau = scenario.tau
    frac = scenario.tox_cycle1_fraction
    out = {}
    for combo in scenario.grid.combos():
        i, j = combo.i - 1, combo.j - 1
        p_t = float(scenario.p_tox[i, j])
        p_a = float(scenario.p_act[i, j])
        out[combo.key()] = LognormalParams(
            tox=solve_lognormal(p_t, frac * p_t, tau),
            act=solve_lognormal(p_a, p_a / tau, tau),
        )
    return out


def generate_patient(params: LognormalParams, rng: np.random.Generator):
    """One (t_tox, t_act) pair in cycles since entry; inf means never.

    Two standard normals are always consumed, so a patient's event times
    depend only on their own substream position.
    """
    z1 = rng.standard_normal()
    z2 = rng.standard_normal()
    z_t = z1
    z_a = params.rho * z1 + np.sqrt(1.0 - params.rho**2) * z2
    t_t = np.exp(params.tox[0] + params.tox[1] * z_t) if params.tox else np.inf
    t_a = np.exp(params.act[0] + params.act[1] * z_a) if params.act else np.inf
    return float(t_t), float(t_a)
