"""Dual-agent TITE-BOIN12: per-combo quasi-event utility posteriors, interval
boundaries on the toxicity estimate, and local candidate-set dose selection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .grid import DoseCombo, DoseGrid, TargetSpec
from .utility import BoinUtilityTable

__all__ = [
    "BoinBoundaries",
    "boin_boundaries",
    "ComboStats",
    "pi_hat",
    "quasi_events",
    "utility_lower_bar",
    "utility_threshold",
    "utility_exceedance",
    "decision_sets",
    "boin12_next_dose",
    "beta_binomial_admissible",
]


@dataclass(frozen=True)
class BoinBoundaries:
    """Escalation/de-escalation cutoffs on the toxicity estimate."""

    lambda_e: float
    lambda_d: float
    phi1: float
    phi2: float

    def __post_init__(self):
        if not 0.0 < self.lambda_e < self.lambda_d < 1.0:
            raise ValueError("need 0 < lambda_e < lambda_d < 1")


def boin_boundaries(phi_t: float, phi1: float | None = None, phi2: float | None = None):
    """Optimal interval boundaries; phi1/phi2 default to 0.6/1.4 of target."""
    if phi1 is None:
        phi1 = 0.6 * phi_t
    if phi2 is None:
        phi2 = 1.4 * phi_t
    if not 0.0 < phi1 < phi_t < phi2 < 1.0:
        raise ValueError("need 0 < phi1 < phi_t < phi2 < 1")
    lam_e = np.log((1 - phi1) / (1 - phi_t)) / np.log(
        phi_t * (1 - phi1) / (phi1 * (1 - phi_t))
    )
    lam_d = np.log((1 - phi_t) / (1 - phi2)) / np.log(
        phi2 * (1 - phi_t) / (phi_t * (1 - phi2))
    )
    return BoinBoundaries(float(lam_e), float(lam_d), phi1, phi2)


def pi_hat(y, w, delta) -> float:
    """Current event-rate estimate: ascertained events over ascertained
    patients plus weighted pending follow-up. Zero with no information."""
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    d = np.asarray(delta, dtype=float)
    num = float(np.sum(d * y))
    den = num + float(np.sum(d * (1 - y))) + float(np.sum(w * (1 - d)))
    return num / den if den > 0 else 0.0


def _event_prob(y, w, delta, p_hat):
    """P(Y=1) per record: indicator when ascertained, else imputed."""
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    d = np.asarray(delta, dtype=float)
    denom = np.maximum(1.0 - p_hat * w, 1e-12)
    imputed = np.minimum(p_hat * (1.0 - w) / denom, 1.0)
    return np.where(d == 1, y, imputed)


@dataclass
class ComboStats:
    """Per-combo summary feeding the utility posterior."""

    n: int
    x: float
    pi_hat_t: float
    pi_hat_a: float

    def __post_init__(self):
        if not 0.0 <= self.x <= self.n + 1e-9:
            raise ValueError("quasi-events must lie in [0, n]")


def quasi_events(
    y_t, w_t, delta_t, y_a, w_a, delta_a,
    table: BoinUtilityTable,
    pi_hat_t: float,
    pi_hat_a: float,
) -> float:
    """Number of quasi-events x: outcome scores averaged over observed and
    imputed cell masses, scaled to [0, n]."""
    pt1 = _event_prob(y_t, w_t, delta_t, pi_hat_t)
    pa1 = _event_prob(y_a, w_a, delta_a, pi_hat_a)
    per_patient = (
        table.psi00 * (1 - pt1) * (1 - pa1)
        + table.psi01 * (1 - pt1) * pa1
        + table.psi10 * pt1 * (1 - pa1)
        + table.psi11 * pt1 * pa1
    )
    return float(np.sum(per_patient)) / 100.0


def combo_stats(data, combo_key, table: BoinUtilityTable) -> ComboStats:
    """Summarize one combo's records from an ObservedData snapshot."""
    sel = [i for i, k in enumerate(data.combo_keys) if k == tuple(combo_key)]
    if not sel:
        return ComboStats(0, 0.0, 0.0, 0.0)
    y_t, w_t, d_t = data.y_t[sel], data.w_t[sel], data.delta_t[sel]
    y_a, w_a, d_a = data.y_a[sel], data.w_a[sel], data.delta_a[sel]
    ph_t = pi_hat(y_t, w_t, d_t)
    ph_a = pi_hat(y_a, w_a, d_a)
    x = quasi_events(y_t, w_t, d_t, y_a, w_a, d_a, table, ph_t, ph_a)
    return ComboStats(len(sel), x, ph_t, ph_a)


def utility_lower_bar(table: BoinUtilityTable, phi_t: float, phi_a: float) -> float:
    """Benchmark utility of a borderline dose, on the 0-100 scale."""
    return (
        table.psi01 * phi_a * (1 - phi_t)
        + table.psi00 * (1 - phi_t) * (1 - phi_a)
        + table.psi11 * phi_t * phi_a
    )


def utility_threshold(table: BoinUtilityTable, phi_t: float, phi_a: float) -> float:
    u_low = utility_lower_bar(table, phi_t, phi_a)
    return u_low + (100.0 - u_low) / 2.0


def utility_exceedance(x: float, n: int, u_b: float) -> float:
    """P(u* > u_b/100) under u*|D ~ Beta(1+x, 1+n-x)."""
    return float(1.0 - betainc(1.0 + x, 1.0 + n - x, u_b / 100.0))


def decision_sets(combo: DoseCombo, grid: DoseGrid):
    """(de-escalation, stay, escalation) candidate sets, clipped to the grid."""
    i, j = combo.i, combo.j
    a_d = [(i - 1, j), (i, j - 1)]
    a_s = a_d + [(i, j)]
    a_e = a_s + [(i + 1, j - 1), (i - 1, j + 1), (i + 1, j), (i, j + 1)]

    def clip(keys):
        return [DoseCombo(a, b) for a, b in keys if 1 <= a <= grid.I and 1 <= b <= grid.J]

    return clip(a_d), clip(a_s), clip(a_e)


def boin12_next_dose(
    current: DoseCombo,
    stats: dict,
    boundaries: BoinBoundaries,
    allowed: set,
    u_b: float,
    grid: DoseGrid,
):
    """Next combo by the interval rule, or None if no candidate is allowed.

    ``stats`` maps combo keys to ComboStats; ``allowed`` holds the keys that
    are admissible, skipping-allowed and not hard-safety excluded. Ties in
    the utility criterion prefer the higher agent-2 dose, then agent-1.
    """
    a_d, a_s, a_e = decision_sets(current, grid)
    cur = stats.get(current.key(), ComboStats(0, 0.0, 0.0, 0.0))
    if cur.pi_hat_t >= boundaries.lambda_d:
        candidates = a_d
    elif cur.pi_hat_t > boundaries.lambda_e:
        candidates = a_s
    else:
        candidates = a_e
    best = None
    best_score = None
    for combo in candidates:
        if combo.key() not in allowed:
            continue
        st = stats.get(combo.key(), ComboStats(0, 0.0, 0.0, 0.0))
        score = (utility_exceedance(st.x, st.n, u_b), combo.j, combo.i)
        if best_score is None or score > best_score:
            best, best_score = combo, score
    return best


def beta_binomial_admissible(data, combo_key, targets: TargetSpec) -> bool:
    """Model-assisted admissibility via per-combo Beta(1,1) posteriors built
    from ascertained outcomes and weighted pending follow-up."""
    sel = [i for i, k in enumerate(data.combo_keys) if k == tuple(combo_key)]
    if not sel:
        a_t, b_t = 1.0, 1.0
        a_a, b_a = 1.0, 1.0
    else:
        y_t, w_t, d_t = data.y_t[sel], data.w_t[sel], data.delta_t[sel]
        y_a, w_a, d_a = data.y_a[sel], data.w_a[sel], data.delta_a[sel]
        a_t = 1.0 + float(np.sum(d_t * y_t))
        b_t = 1.0 + float(np.sum(d_t * (1 - y_t))) + float(np.sum(w_t * (1 - d_t)))
        a_a = 1.0 + float(np.sum(d_a * y_a))
        b_a = 1.0 + float(np.sum(d_a * (1 - y_a))) + float(np.sum(w_a * (1 - d_a)))
    p_safe = betainc(a_t, b_t, targets.phi_t)  # P(pi_t < phi_t)
    p_active = 1.0 - betainc(a_a, b_a, targets.phi_a)  # P(pi_a > phi_a)
    return bool(p_safe > targets.q_t and p_active > targets.q_a)
