"""Joint TITE-BLRM: per-agent two-parameter logistic curves combined through
an odds multiplier with an agent-interaction term per endpoint, endpoints
joined by the Gumbel kernel. Eleven parameters in the full model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import DoseGrid
from .gumbel import CELL_FLOOR, cell_prob
from .pocrm import ObservedData
from .sampler import SampleResult, SamplerConfig, sample_posterior

__all__ = [
    "BlrmHyper",
    "scale_doses",
    "combo_prob",
    "blrm_fit",
    "blrm_fit_tox_only",
    "BlrmFit",
]


@dataclass(frozen=True)
class BlrmHyper:
    """Normal priors (c1, c2, v1, v2) on (beta0, log beta1) per agent and
    endpoint, half-normal scale for the agent-interaction eta, and the
    association prior variance."""

    w1_tox: tuple = (-6.0, 0.0, 1.0, 0.5)
    w1_act: tuple = (-3.0, -5.0, 1.0, 4.0)
    w2_tox: tuple = (-5.5, 1.0, 1.0, 0.5)
    w2_act: tuple = (-4.0, -5.0, 1.0, 4.0)
    eta_scale: float = 1.0
    psi_var: float = 100.0
    dose_scaling: str = "max_normalized"

    def __post_init__(self):
        if self.eta_scale <= 0 or self.psi_var <= 0:
            raise ValueError("prior scales must be positive")
        if self.dose_scaling not in ("max_normalized", "raw"):
            raise ValueError("dose_scaling must be 'max_normalized' or 'raw'")
        for ep in (self.w1_tox, self.w1_act, self.w2_tox, self.w2_act):
            if len(ep) != 4 or ep[2] <= 0 or ep[3] <= 0:
                raise ValueError("hyper must be (c1, c2, v1>0, v2>0)")


def scale_doses(grid: DoseGrid, mode: str = "max_normalized"):
    """Per-combo scaled dose pairs (d1s, d2s) in row-major combo order.

    The Table-1 hyperparameters are only numerically sane on an O(1) dose
    scale, so the default divides by each agent's maximum dose.
    """
    a1 = np.asarray(grid.agent1_doses)
    a2 = np.asarray(grid.agent2_doses)
    if mode == "max_normalized":
        a1 = a1 / a1.max()
        a2 = a2 / a2.max()
    elif mode != "raw":
        raise ValueError(f"unknown dose scaling mode {mode!r}")
    combos = grid.combos()
    d1s = np.array([a1[c.i - 1] for c in combos])
    d2s = np.array([a2[c.j - 1] for c in combos])
    return d1s, d2s


def combo_prob(d1s, d2s, beta1, beta2, eta):
    """Probability at one combo from per-agent curves and interaction eta.

    beta_k = (beta0_k, beta1_k) on the natural (not log) slope scale.
    Computed in log-odds space so saturated curves stay finite.
    """
    lo1 = beta1[0] + beta1[1] * d1s
    lo2 = beta2[0] + beta2[1] * d2s
    log_odds = np.logaddexp(np.logaddexp(lo1, lo2), lo1 + lo2) + eta * d1s * d2s
    out = 1.0 / (1.0 + np.exp(-log_odds))
    return float(out) if np.ndim(out) == 0 else out


# theta layout shared with the compiled kernel
_PARAM_NAMES = (
    "beta0_w1_tox", "log_beta1_w1_tox", "beta0_w2_tox", "log_beta1_w2_tox",
    "beta0_w1_act", "log_beta1_w1_act", "beta0_w2_act", "log_beta1_w2_act",
    "eta_tox", "eta_act", "psi",
)


def _prior_arrays(hyper: BlrmHyper):
    pm = np.array([
        hyper.w1_tox[0], hyper.w1_tox[1], hyper.w2_tox[0], hyper.w2_tox[1],
        hyper.w1_act[0], hyper.w1_act[1], hyper.w2_act[0], hyper.w2_act[1],
        0.0, 0.0, 0.0,
    ])
    pv = np.array([
        hyper.w1_tox[2], hyper.w1_tox[3], hyper.w2_tox[2], hyper.w2_tox[3],
        hyper.w1_act[2], hyper.w1_act[3], hyper.w2_act[2], hyper.w2_act[3],
        hyper.eta_scale ** 2, hyper.eta_scale ** 2, hyper.psi_var,
    ])
    return pm, pv


def blrm_loglik_reference(theta, d1s, d2s, combo_idx, w_a, w_t, y_a, y_t):
    """Pure-numpy likelihood; reference for the compiled kernel."""
    p_t = combo_prob(d1s, d2s, (theta[0], np.exp(theta[1])), (theta[2], np.exp(theta[3])), theta[8])
    p_a = combo_prob(d1s, d2s, (theta[4], np.exp(theta[5])), (theta[6], np.exp(theta[7])), theta[9])
    g_a = np.asarray(w_a) * p_a[combo_idx]
    g_t = np.asarray(w_t) * p_t[combo_idx]
    cells = cell_prob(g_a, g_t, y_a, y_t, theta[10])
    return float(np.sum(np.log(np.maximum(cells, CELL_FLOOR))))


@dataclass
class BlrmFit:
    """Posterior draws from one fit, combos in row-major grid order."""

    pi_a: np.ndarray  # (keep, n_combos)
    pi_t: np.ndarray
    draws: np.ndarray  # (keep, 11) in _PARAM_NAMES order
    sample: SampleResult = None
    seed: int = 0


def _pi_draws(draws, d1s, d2s, tox: bool):
    o = 0 if tox else 4
    eta = draws[:, [8 if tox else 9]]
    lo1 = draws[:, [o]] + np.exp(draws[:, [o + 1]]) * d1s[None, :]
    lo2 = draws[:, [o + 2]] + np.exp(draws[:, [o + 3]]) * d2s[None, :]
    log_odds = np.logaddexp(np.logaddexp(lo1, lo2), lo1 + lo2) + eta * (d1s * d2s)[None, :]
    return 1.0 / (1.0 + np.exp(-log_odds))


_REFLECT = np.array([False] * 8 + [True, True, False])
# half-normal prior medians for the eta coordinates
_HN_MEDIAN = 0.6744897501960817


def blrm_fit(
    data: ObservedData,
    grid: DoseGrid,
    hyper: BlrmHyper,
    cfg: SamplerConfig,
    seed: int,
) -> BlrmFit:
    d1s, d2s = scale_doses(grid, hyper.dose_scaling)
    combo_keys = [c.key() for c in grid.combos()]
    key_to_idx = {k: i for i, k in enumerate(combo_keys)}
    combo_idx = np.array([key_to_idx[k] for k in data.combo_keys], dtype=np.int64)
    pm, pv = _prior_arrays(hyper)
    init = pm.copy()
    init[8] = init[9] = hyper.eta_scale * _HN_MEDIAN
    kernel_data = (d1s, d2s, combo_idx, data.w_a, data.w_t, data.y_a, data.y_t, pm, pv)
    res = sample_posterior(
        _kernels.blrm_logpost, init, cfg,
        data=kernel_data, scales=np.sqrt(pv), reflect=_REFLECT, seed=seed,
        param_names=_PARAM_NAMES,
    )
    pi_t = _pi_draws(res.draws, d1s, d2s, tox=True)
    pi_a = _pi_draws(res.draws, d1s, d2s, tox=False)
    return BlrmFit(pi_a, pi_t, res.draws, sample=res, seed=seed)


def blrm_fit_tox_only(
    data: ObservedData,
    grid: DoseGrid,
    hyper: BlrmHyper,
    cfg: SamplerConfig,
    seed: int,
) -> BlrmFit:
    """Safety-model-only fit used by prior calibration step 1."""
    d1s, d2s = scale_doses(grid, hyper.dose_scaling)
    combo_keys = [c.key() for c in grid.combos()]
    key_to_idx = {k: i for i, k in enumerate(combo_keys)}
    combo_idx = np.array([key_to_idx[k] for k in data.combo_keys], dtype=np.int64)
    pm = np.array([hyper.w1_tox[0], hyper.w1_tox[1], hyper.w2_tox[0], hyper.w2_tox[1], 0.0])
    pv = np.array([hyper.w1_tox[2], hyper.w1_tox[3], hyper.w2_tox[2], hyper.w2_tox[3],
                   hyper.eta_scale ** 2])
    init = pm.copy()
    init[4] = hyper.eta_scale * _HN_MEDIAN
    kernel_data = (d1s, d2s, combo_idx, data.w_t, data.y_t, pm, pv)
    res = sample_posterior(
        _kernels.blrm_tox_logpost, init, cfg,
        data=kernel_data, scales=np.sqrt(pv),
        reflect=np.array([False] * 4 + [True]), seed=seed,
        param_names=_PARAM_NAMES[:4] + ("eta_tox",),
    )
    d = res.draws
    eta = d[:, [4]]
    lo1 = d[:, [0]] + np.exp(d[:, [1]]) * d1s[None, :]
    lo2 = d[:, [2]] + np.exp(d[:, [3]]) * d2s[None, :]
    log_odds = np.logaddexp(np.logaddexp(lo1, lo2), lo1 + lo2) + eta * (d1s * d2s)[None, :]
    pi_t = 1.0 / (1.0 + np.exp(-log_odds))
    pi_a = np.full_like(pi_t, np.nan)
    return BlrmFit(pi_a, pi_t, d, sample=res, seed=seed)
