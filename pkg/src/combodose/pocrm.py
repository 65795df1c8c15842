"""Joint TITE-POCRM: partial-order selection plus a joint two-parameter
logistic fit over the mapped one-dimensional skeleton.

Part 1 scores each candidate ordering through an independent one-parameter
power model per endpoint; Part 2 fits the joint logistic model under the
selected orderings and yields per-combo posterior draws of (pi_a, pi_t).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .grid import DoseGrid, PatientRecord, compute_weights
from .gumbel import CELL_FLOOR, cell_prob
from .sampler import SampleResult, SamplerConfig, log_marginal_likelihood_1d, sample_posterior

__all__ = [
    "Skeleton",
    "OrderingSet",
    "PocrmHyper",
    "ObservedData",
    "default_skeletons",
    "default_orderings",
    "ordering_posterior",
    "select_orderings",
    "pocrm_fit",
    "pocrm_fit_tox_only",
    "PocrmFit",
]

SKELETON_ACTIVITY = (0.300, 0.402, 0.501, 0.593, 0.673, 0.741, 0.797, 0.842, 0.878, 0.906)
SKELETON_TOXICITY = (0.261, 0.300, 0.340, 0.381, 0.422, 0.462, 0.501, 0.538, 0.574, 0.609)

# Candidate orderings over the 2x5 grid: rows; columns/up diagonal; up-down
# diagonal; down-up diagonal; down diagonal.
ORDERINGS_2X5 = (
    ((1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5)),
    ((1, 1), (2, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)),
    ((1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (1, 4), (2, 3), (1, 5), (2, 4), (2, 5)),
    ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (1, 4), (2, 3), (2, 4), (1, 5), (2, 5)),
    ((1, 1), (2, 1), (1, 2), (1, 3), (2, 2), (1, 4), (2, 3), (1, 5), (2, 4), (2, 5)),
)

# Candidate orderings over the 3x3 grid: rows; columns; down-up diagonal;
# up-down diagonal; up diagonal; down diagonal.
ORDERINGS_3X3 = (
    ((1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)),
    ((1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3)),
    ((1, 1), (2, 1), (1, 2), (1, 3), (2, 2), (3, 1), (3, 2), (2, 3), (3, 3)),
    ((1, 1), (1, 2), (2, 1), (3, 1), (2, 2), (1, 3), (2, 3), (3, 2), (3, 3)),
    ((1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1), (2, 3), (3, 2), (3, 3)),
    ((1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (1, 3), (3, 2), (2, 3), (3, 3)),
)


@dataclass(frozen=True)
class Skeleton:
    """Increasing prior response probabilities mapped onto combo ranks."""

    values: tuple
    endpoint: str  # "activity" | "toxicity"

    def __post_init__(self):
        v = tuple(float(x) for x in self.values)
        object.__setattr__(self, "values", v)
        if any(not 0.0 < x < 1.0 for x in v):
            raise ValueError("skeleton values must lie in (0,1)")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError("skeleton must be strictly increasing")


def _check_dominance(ordering, I, J):
    pos = {c: r for r, c in enumerate(ordering)}
    for i in range(1, I + 1):
        for j in range(1, J + 1):
            if i < I and pos[(i, j)] > pos[(i + 1, j)]:
                return False
            if j < J and pos[(i, j)] > pos[(i, j + 1)]:
                return False
    return True


@dataclass(frozen=True)
class OrderingSet:
    """Candidate full orderings (rank -> combo key) with prior weights."""

    orderings: tuple
    prior_weights: tuple
    I: int  # noqa: E743
    J: int

    def __post_init__(self):
        combos = {(i, j) for i in range(1, self.I + 1) for j in range(1, self.J + 1)}
        for order in self.orderings:
            if set(order) != combos or len(order) != len(combos):
                raise ValueError("each ordering must be a full permutation of the grid")
            if not _check_dominance(order, self.I, self.J):
                raise ValueError(f"ordering violates componentwise dominance: {order}")
        w = np.asarray(self.prior_weights, dtype=float)
        if len(w) != len(self.orderings) or abs(w.sum() - 1.0) > 1e-12 or (w < 0).any():
            raise ValueError("prior weights must be a probability vector over orderings")

    def __len__(self):
        return len(self.orderings)

    def rank(self, m: int, combo_key) -> int:
        return self.orderings[m].index(tuple(combo_key))

    def skeleton_values(self, m: int, skeleton: Skeleton, combo_keys) -> np.ndarray:
        return np.array([skeleton.values[self.rank(m, c)] for c in combo_keys])

    def to_jsonable(self):
        return [[list(c) for c in order] for order in self.orderings]


def default_skeletons(grid: DoseGrid):
    """Built-in activity/toxicity skeletons for the 2x5 and 3x3 grids."""
    n = grid.n_combos
    if n == 10:
        act, tox = SKELETON_ACTIVITY, SKELETON_TOXICITY
    elif n == 9:
        act, tox = SKELETON_ACTIVITY[:9], SKELETON_TOXICITY[:9]
    else:
        raise ValueError(f"no built-in skeleton for {grid.I}x{grid.J}; supply your own")
    return Skeleton(act, "activity"), Skeleton(tox, "toxicity")


def default_orderings(I, J) -> OrderingSet:  # noqa: E741
    """Built-in dominance-consistent orderings; uniform prior weights."""
    if (I, J) == (2, 5):
        orders = ORDERINGS_2X5
    elif (I, J) == (3, 3):
        orders = ORDERINGS_3X3
    else:
        raise ValueError(f"no built-in orderings for {I}x{J}; supply your own")
    m = len(orders)
    return OrderingSet(orders, tuple([1.0 / m] * m), I, J)


@dataclass(frozen=True)
class PocrmHyper:
    """Prior hyperparameters: part-1 power-model sd and part-2 normal priors
    (c1, c2) means and (v1, v2) variances for (beta0, log beta1)."""

    alpha_sd: float = 1.34
    tox: tuple = (-4.0, 2.5, 1.0, 0.25)
    act: tuple = (-4.0, 2.0, 1.5, 0.5)
    psi_var: float = 100.0

    def __post_init__(self):
        if self.alpha_sd <= 0 or self.psi_var <= 0:
            raise ValueError("prior scales must be positive")
        for ep in (self.tox, self.act):
            if len(ep) != 4 or ep[2] <= 0 or ep[3] <= 0:
                raise ValueError("endpoint hyper must be (c1, c2, v1>0, v2>0)")


@dataclass
class ObservedData:
    """Per-patient outcomes and weights at one decision time."""

    combo_keys: list
    y_t: np.ndarray
    w_t: np.ndarray
    y_a: np.ndarray
    w_a: np.ndarray
    delta_t: np.ndarray
    delta_a: np.ndarray

    @classmethod
    def from_patients(cls, patients, now, tau):
        outs = [compute_weights(p, now, tau) for p in patients]
        return cls(
            combo_keys=[p.combo.key() for p in patients],
            y_t=np.array([o.y_t for o in outs], dtype=np.int64),
            w_t=np.array([o.w_t for o in outs]),
            y_a=np.array([o.y_a for o in outs], dtype=np.int64),
            w_a=np.array([o.w_a for o in outs]),
            delta_t=np.array([o.delta_t for o in outs], dtype=np.int64),
            delta_a=np.array([o.delta_a for o in outs], dtype=np.int64),
        )

    @property
    def n(self):
        return len(self.combo_keys)


def power_model_loglik(alpha, x, w, y):
    """Part-1 weighted power-model log-likelihood, vectorized over alpha.

    G = w * x**exp(alpha); contributions y*log(G) + (1-y)*log(1-G).
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    if len(x) == 0:
        return np.zeros_like(alpha)
    logx = np.log(np.asarray(x, dtype=float))[None, :]  # strictly negative
    with np.errstate(over="ignore", under="ignore"):
        e = np.exp(alpha)[:, None]
        logF = e * logx
        G = np.asarray(w, dtype=float)[None, :] * np.exp(logF)
    y = np.asarray(y, dtype=float)[None, :]
    logw = np.log(np.maximum(np.asarray(w, dtype=float), CELL_FLOOR))[None, :]
    term1 = y * (logw + logF)
    with np.errstate(divide="ignore"):
        term0 = (1.0 - y) * np.log(np.maximum(1.0 - G, CELL_FLOOR))
    return np.sum(term1 + term0, axis=1)


def ordering_posterior(
    data: ObservedData,
    skeleton: Skeleton,
    orderings: OrderingSet,
    alpha_sd: float = 1.34,
    endpoint: str = "toxicity",
    nodes: int = 64,
) -> np.ndarray:
    """Posterior weights over candidate orderings for one endpoint."""
    y = data.y_t if endpoint == "toxicity" else data.y_a
    w = data.w_t if endpoint == "toxicity" else data.w_a
    prior = np.asarray(orderings.prior_weights, dtype=float)
    log_ml = np.empty(len(orderings))
    for m in range(len(orderings)):
        x = orderings.skeleton_values(m, skeleton, data.combo_keys)
        log_ml[m] = log_marginal_likelihood_1d(
            lambda a: power_model_loglik(a, x, w, y), 0.0, alpha_sd,
            nodes=nodes, vectorized=True,
        )
    with np.errstate(invalid="ignore", divide="ignore"):
        log_post = np.log(prior) + log_ml
    if not np.isfinite(log_post).any():
        warnings.warn(
            "all ordering marginal likelihoods vanished; falling back to uniform",
            RuntimeWarning,
        )
        return np.full(len(orderings), 1.0 / len(orderings))
    log_post -= np.max(log_post[np.isfinite(log_post)])
    post = np.exp(log_post)
    return post / post.sum()


def select_orderings(posterior_a: np.ndarray, posterior_t: np.ndarray):
    """Highest-posterior ordering per endpoint; ties go to the lowest index."""
    return int(np.argmax(posterior_a)), int(np.argmax(posterior_t))


def pocrm_loglik_reference(theta, x_a, x_t, w_a, w_t, y_a, y_t):
    """Pure-numpy part-2 log-likelihood; reference for the compiled kernel."""
    b0a, b1a, b0t, b1t, psi = theta[0], np.exp(theta[1]), theta[2], np.exp(theta[3]), theta[4]
    g_a = np.asarray(w_a) / (1.0 + np.exp(-(b0a + b1a * np.asarray(x_a))))
    g_t = np.asarray(w_t) / (1.0 + np.exp(-(b0t + b1t * np.asarray(x_t))))
    cells = cell_prob(g_a, g_t, y_a, y_t, psi)
    return float(np.sum(np.log(np.maximum(cells, CELL_FLOOR))))


@dataclass
class PocrmFit:
    """Posterior draws from one part-2 fit, combos in row-major grid order."""

    pi_a: np.ndarray  # (keep, n_combos)
    pi_t: np.ndarray
    draws: np.ndarray  # (keep, 5): b0a, log b1a, b0t, log b1t, psi
    m_a: int
    m_t: int
    ordering_post_a: np.ndarray = None
    ordering_post_t: np.ndarray = None
    sample: SampleResult = None
    seed: int = 0


_PARAM_NAMES = ("beta0_act", "log_beta1_act", "beta0_tox", "log_beta1_tox", "psi")


def pocrm_fit(
    data: ObservedData,
    grid: DoseGrid,
    m_a: int,
    m_t: int,
    skeleton_a: Skeleton,
    skeleton_t: Skeleton,
    orderings: OrderingSet,
    hyper: PocrmHyper,
    cfg: SamplerConfig,
    seed: int,
) -> PocrmFit:
    """Part-2 joint fit under the selected orderings."""
    x_a = orderings.skeleton_values(m_a, skeleton_a, data.combo_keys)
    x_t = orderings.skeleton_values(m_t, skeleton_t, data.combo_keys)
    pm = np.array([hyper.act[0], hyper.act[1], hyper.tox[0], hyper.tox[1], 0.0])
    pv = np.array([hyper.act[2], hyper.act[3], hyper.tox[2], hyper.tox[3], hyper.psi_var])
    kernel_data = (x_a, x_t, data.w_a, data.w_t, data.y_a, data.y_t, pm, pv)
    res = sample_posterior(
        _kernels.pocrm_logpost, pm, cfg,
        data=kernel_data, scales=np.sqrt(pv), seed=seed, param_names=_PARAM_NAMES,
    )
    combo_keys = [c.key() for c in grid.combos()]
    xs_a = orderings.skeleton_values(m_a, skeleton_a, combo_keys)
    xs_t = orderings.skeleton_values(m_t, skeleton_t, combo_keys)
    d = res.draws
    # window probabilities use weight 1: pi = F(x, beta)
    pi_a = 1.0 / (1.0 + np.exp(-(d[:, [0]] + np.exp(d[:, [1]]) * xs_a[None, :])))
    pi_t = 1.0 / (1.0 + np.exp(-(d[:, [2]] + np.exp(d[:, [3]]) * xs_t[None, :])))
    return PocrmFit(pi_a, pi_t, d, m_a, m_t, sample=res, seed=seed)


def pocrm_fit_tox_only(
    data: ObservedData,
    grid: DoseGrid,
    m_t: int,
    skeleton_t: Skeleton,
    orderings: OrderingSet,
    hyper: PocrmHyper,
    cfg: SamplerConfig,
    seed: int,
) -> PocrmFit:
    """Safety-model-only fit used by prior calibration step 1."""
    x_t = orderings.skeleton_values(m_t, skeleton_t, data.combo_keys)
    pm = np.array([hyper.tox[0], hyper.tox[1]])
    pv = np.array([hyper.tox[2], hyper.tox[3]])
    kernel_data = (x_t, data.w_t, data.y_t, pm, pv)
    res = sample_posterior(
        _kernels.pocrm_tox_logpost, pm, cfg,
        data=kernel_data, scales=np.sqrt(pv), seed=seed,
        param_names=_PARAM_NAMES[2:4],
    )
    combo_keys = [c.key() for c in grid.combos()]
    xs_t = orderings.skeleton_values(m_t, skeleton_t, combo_keys)
    d = res.draws
    pi_t = 1.0 / (1.0 + np.exp(-(d[:, [0]] + np.exp(d[:, [1]]) * xs_t[None, :])))
    pi_a = np.full_like(pi_t, np.nan)
    return PocrmFit(pi_a, pi_t, d, m_a=-1, m_t=m_t, sample=res, seed=seed)
