"""Posterior computation utilities.

Two tools: a deterministic Gauss-Hermite marginal-likelihood quadrature for
one-parameter working models, and an adaptive componentwise random-walk
Metropolis sampler used for the joint design fits.

Reproducibility contract: all proposal noise and acceptance uniforms are
pre-drawn from a PCG64 stream, so identical (seed, config, log-posterior)
give bit-identical draws. Proposal scales adapt during burn-in only and are
frozen afterwards.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

try:  # numba is an optional fast path for jitted log-posteriors
    from numba.core.dispatcher import Dispatcher as _NumbaDispatcher

    from ._kernels import get_chain_driver as _get_chain_driver
except ImportError:  # pragma: no cover
    _NumbaDispatcher = ()
    _get_chain_driver = None

__all__ = [
    "SamplerConfig",
    "SampleResult",
    "marginal_likelihood_1d",
    "log_marginal_likelihood_1d",
    "sample_posterior",
]


@dataclass(frozen=True)
class SamplerConfig:
    """Chain length and adaptation settings for one posterior fit."""

    burn_in: int = 2000
    keep: int = 4000
    adapt_window: int = 50
    target_accept: float = 0.30
    seed: int = 0
    jit: bool = True

    def __post_init__(self):
        if self.keep < 1:
            raise ValueError("keep must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if not 0.0 < self.target_accept < 1.0:
            raise ValueError("target_accept must lie in (0,1)")


@dataclass
class SampleResult:
    """Posterior draws plus chain diagnostics."""

    draws: np.ndarray  # (keep, k)
    accept_rate: np.ndarray  # per coordinate, post burn-in
    scales: np.ndarray  # frozen proposal scales
    ess: float  # crude lag-1 estimate, min over coordinates
    warnings: list = field(default_factory=list)


_GH_CACHE = {}


def _gh_nodes(n):
    if n not in _GH_CACHE:
        t, w = np.polynomial.hermite.hermgauss(n)
        _GH_CACHE[n] = (t, np.log(w))
    return _GH_CACHE[n]


def log_marginal_likelihood_1d(loglik, prior_mean, prior_sd, nodes=64, vectorized=False):
    """log of the integral of exp(loglik) against a normal prior density.

    Gauss-Hermite quadrature on the prior measure, log-sum-exp stabilized.
    With ``vectorized=True`` the callable receives the whole node array.
    """
    t, logw = _gh_nodes(nodes)
    alpha = prior_mean + np.sqrt(2.0) * prior_sd * t
    if vectorized:
        ll = np.asarray(loglik(alpha), dtype=float)
    else:
        ll = np.array([loglik(a) for a in alpha], dtype=float)
    return float(logsumexp(logw + ll) - 0.5 * np.log(np.pi))


def marginal_likelihood_1d(loglik, prior_mean, prior_sd, nodes=64, vectorized=False):
    """Marginal likelihood on the linear scale; see log_marginal_likelihood_1d."""
    return float(
        np.exp(log_marginal_likelihood_1d(loglik, prior_mean, prior_sd, nodes, vectorized))
    )


def _adapt_step(batch):
    # diminishing adaptation; large early steps let badly scaled starts recover
    return min(1.0, 4.0 / np.sqrt(batch))


def _run_chain_python(logpost, data, theta0, z, u, scales0, reflect, burn, adapt_window, target):
    call = (lambda th: logpost(th, data)) if data is not None else logpost
    total, k = z.shape
    theta = theta0.copy()
    ls = np.log(scales0.copy())
    lp = call(theta)
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
            lp_new = call(theta)
            if np.log(u[t, c]) < lp_new - lp:
                lp = lp_new
                acc_win[c] += 1.0
                if t >= burn:
                    acc_post[c] += 1.0
            else:
                theta[c] = old
        if t < burn and (t + 1) % adapt_window == 0:
            batch += 1
            step = _adapt_step(batch)
            for c in range(k):
                ls[c] += step * (acc_win[c] / adapt_window - target)
                acc_win[c] = 0.0
        if t >= burn:
            draws[t - burn] = theta
    return draws, acc_post / keep, np.exp(ls)


def _crude_ess(draws):
    keep = draws.shape[0]
    if keep < 3:
        return float(keep)
    ess = float(keep)
    for c in range(draws.shape[1]):
        x = draws[:, c]
        v = np.var(x)
        if v <= 0:
            return 1.0
        rho = float(np.corrcoef(x[:-1], x[1:])[0, 1])
        rho = min(max(rho, -0.999), 0.999)
        ess = min(ess, keep * (1 - rho) / (1 + rho))
    return max(ess, 1.0)


def sample_posterior(
    logpost,
    init,
    cfg: SamplerConfig,
    *,
    data=None,
    scales=None,
    reflect=None,
    seed=None,
    param_names=None,
) -> SampleResult:
    """Adaptive componentwise random-walk Metropolis over an unnormalized
    log-posterior.

    ``logpost`` is called as ``logpost(theta)`` or, when ``data`` is given,
    ``logpost(theta, data)``. If it is a numba dispatcher and ``cfg.jit``
    holds, a compiled chain driver is used; otherwise a pure-python loop with
    the same arithmetic runs. Coordinates flagged in ``reflect`` propose on
    the nonnegative half-line by reflection at zero.
    """
    theta0 = np.asarray(init, dtype=float).copy()
    k = theta0.shape[0]
    names = list(param_names) if param_names is not None else [f"theta[{i}]" for i in range(k)]
    for c in range(k):
        if not np.isfinite(theta0[c]):
            raise ValueError(f"non-finite initial value for parameter {names[c]}")

    lp0 = logpost(theta0, data) if data is not None else logpost(theta0)
    if not np.isfinite(lp0):
        raise ValueError(
            f"log-posterior is not finite at initialization (init={theta0.tolist()})"
        )

    scales0 = (
        np.full(k, 1.0) if scales is None else np.asarray(scales, dtype=float).copy()
    )
    reflect_mask = (
        np.zeros(k, dtype=np.bool_)
        if reflect is None
        else np.asarray(reflect, dtype=np.bool_).copy()
    )
    use_seed = cfg.seed if seed is None else seed
    rng = np.random.Generator(np.random.PCG64(use_seed))
    total = cfg.burn_in + cfg.keep
    z = rng.standard_normal((total, k))
    u = rng.random((total, k))

    use_jit = (
        cfg.jit
        and data is not None
        and _get_chain_driver is not None
        and isinstance(logpost, _NumbaDispatcher)
    )
    if use_jit:
        driver = _get_chain_driver(logpost)
        draws, acc, out_scales = driver(
            theta0, data, z, u, scales0, reflect_mask,
            cfg.burn_in, cfg.adapt_window, cfg.target_accept,
        )
    else:
        draws, acc, out_scales = _run_chain_python(
            logpost, data, theta0, z, u, scales0, reflect_mask,
            cfg.burn_in, cfg.adapt_window, cfg.target_accept,
        )

    notes = []
    mean_acc = float(np.mean(acc))
    if not 0.05 <= mean_acc <= 0.8:
        notes.append(f"acceptance rate {mean_acc:.3f} outside [0.05, 0.8]")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    return SampleResult(draws, acc, out_scales, _crude_ess(draws), notes)
