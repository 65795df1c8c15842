"""Admissibility-restricted non-parametric benchmark for unknown orderings.

Each pseudo-patient draws one correlated latent normal pair shared across
all combos (common random numbers), so completed outcomes respect the
scenarios' monotone structure. Ordering posteriors are computed from the
complete information with full weights, per-combo model estimates are
averaged under those posteriors, and selection applies the same
admissibility rule as the designs via beta-binomial posteriors on the
complete counts.
"""

from __future__ import annotations

import concurrent.futures as _futures

import numpy as np
from scipy.special import betainc, logsumexp

from .datagen import scenario_params
from .engine import TrialResult, replicate_seed
from .grid import TargetSpec
from .pocrm import OrderingSet, Skeleton, default_orderings, default_skeletons
from .sampler import _gh_nodes
from .scenarios import ScenarioSpec
from .utility import BoinUtilityTable, UtilityWeights, utility_boin_true, utility_model_based

__all__ = ["benchmark_replicate", "run_benchmark"]


def _complete_outcomes(scenario: ScenarioSpec, n_max: int, seed: int):
    """Completed (y_tox, y_act) indicator arrays of shape (n_max, n_combos).

    Activity is ascertained the way a trial would see it at full follow-up:
    an event inside the window that is not preceded by a DLT.
    """
    params = scenario_params(scenario)
    combos = scenario.grid.combos()
    tau = float(scenario.tau)
    y_t = np.zeros((n_max, len(combos)), dtype=np.int64)
    y_a = np.zeros((n_max, len(combos)), dtype=np.int64)
    rho = -0.5
    for ell in range(n_max):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, ell))))
        z1 = rng.standard_normal()
        z2 = rng.standard_normal()
        z_t = z1
        z_a = rho * z1 + np.sqrt(1 - rho**2) * z2
        for c, combo in enumerate(combos):
            par = params[combo.key()]
            t_t = np.exp(par.tox[0] + par.tox[1] * z_t) if par.tox else np.inf
            t_a = np.exp(par.act[0] + par.act[1] * z_a) if par.act else np.inf
            y_t[ell, c] = t_t <= tau
            y_a[ell, c] = t_a <= tau and t_a <= t_t
    return y_t, y_a


def _ordering_weighted_estimates(
    counts: np.ndarray, n: int, skeleton: Skeleton, orderings: OrderingSet,
    combo_keys, alpha_sd: float = 1.34, nodes: int = 64,
):
    """Posterior-ordering-weighted power-model estimates from complete counts."""
    t, logw = _gh_nodes(nodes)
    alpha = np.sqrt(2.0) * alpha_sd * t
    e_alpha = np.exp(alpha)[:, None]
    log_ml = np.empty(len(orderings))
    est = np.empty((len(orderings), len(combo_keys)))
    for m in range(len(orderings)):
        x = orderings.skeleton_values(m, skeleton, combo_keys)
        logF = e_alpha * np.log(x)[None, :]
        with np.errstate(divide="ignore"):
            log1mF = np.log1p(-np.exp(logF))
        ll = np.sum(counts[None, :] * logF + (n - counts)[None, :] * log1mF, axis=1)
        log_post_nodes = logw + ll
        log_ml[m] = logsumexp(log_post_nodes) - 0.5 * np.log(np.pi)
        post_nodes = np.exp(log_post_nodes - logsumexp(log_post_nodes))
        est[m] = post_nodes @ np.exp(logF)
    log_prior = np.log(np.asarray(orderings.prior_weights))
    log_pm = log_prior + log_ml
    pm = np.exp(log_pm - logsumexp(log_pm))
    return pm @ est


def benchmark_replicate(
    scenario: ScenarioSpec,
    n_max: int = 60,
    seed: int = 0,
    convention: str = "model",
    weights: UtilityWeights = UtilityWeights(),
    boin_table: BoinUtilityTable = BoinUtilityTable(),
    targets: TargetSpec = TargetSpec(),
    orderings: OrderingSet = None,
):
    """Benchmark selection from one replicate of complete information."""
    grid = scenario.grid
    if orderings is None:
        orderings = default_orderings(grid.I, grid.J)
    skel_a, skel_t = default_skeletons(grid)
    combo_keys = [c.key() for c in grid.combos()]

    y_t, y_a = _complete_outcomes(scenario, n_max, seed)
    k_t = y_t.sum(axis=0).astype(float)
    k_a = y_a.sum(axis=0).astype(float)

    pi_t = _ordering_weighted_estimates(k_t, n_max, skel_t, orderings, combo_keys)
    pi_a = _ordering_weighted_estimates(k_a, n_max, skel_a, orderings, combo_keys)

    # admissibility from beta-binomial posteriors on the complete counts
    p_safe = betainc(1.0 + k_t, 1.0 + n_max - k_t, targets.phi_t)
    p_active = 1.0 - betainc(1.0 + k_a, 1.0 + n_max - k_a, targets.phi_a)
    adm = (p_safe > targets.q_t) & (p_active > targets.q_a)
    if not adm.any():
        return None
    if convention == "boin":
        util = utility_boin_true(pi_a, pi_t, boin_table)
    else:
        util = utility_model_based(pi_a, pi_t, weights, targets.phi_t)
    util = np.where(adm, util, -np.inf)
    return combo_keys[int(np.argmax(util))]


def _one(args):
    scenario, n_max, seed, convention, weights, boin_table, targets = args
    sel = benchmark_replicate(scenario, n_max, seed, convention, weights, boin_table, targets)
    return TrialResult(
        design="benchmark", scenario=scenario.name, seed=seed,
        assignments=[], decisions=[], stop_reason="benchmark",
        selection=sel, n_total=n_max, n_unsafe=0,
    )


def run_benchmark(
    scenario: ScenarioSpec,
    n_replicates: int,
    master_seed: int,
    n_max: int = 60,
    convention: str = "model",
    weights: UtilityWeights = UtilityWeights(),
    boin_table: BoinUtilityTable = BoinUtilityTable(),
    targets: TargetSpec = TargetSpec(),
    threads: int = 1,
):
    jobs = [
        (scenario, n_max, replicate_seed(master_seed, r), convention, weights, boin_table, targets)
        for r in range(n_replicates)
    ]
    if threads <= 1:
        return [_one(j) for j in jobs]
    with _futures.ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_one, jobs, chunksize=max(1, n_replicates // (threads * 4))))
