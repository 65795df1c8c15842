"""Admissibility, enforcement (dose skipping, hard safety) and stopping rules.

Cycle-1 toxicity rules run on beta-binomial posteriors with a Beta(1,1)
prior; all threshold comparisons are strict, so boundary cases do not fire.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .grid import DoseGrid, TargetSpec

__all__ = [
    "RuleConfig",
    "StopReason",
    "beta_tail",
    "admissible",
    "allowed_by_skipping",
    "hard_safety_trigger",
    "hard_safety_exclusions",
    "cycle1_counts",
    "check_stopping",
]


class StopReason(str, enum.Enum):
    NO_ADMISSIBLE = "no_admissible"
    LOWEST_UNSAFE = "lowest_unsafe"
    HIGHEST_VERY_SAFE = "highest_very_safe"
    SUFFICIENT_INFORMATION = "sufficient_information"
    HARD_SAFETY = "hard_safety"
    MAX_PATIENTS = "max_patients"
    # fallback when every rule passes but no combo can be assigned
    NO_ASSIGNABLE = "no_assignable"


@dataclass(frozen=True)
class RuleConfig:
    c_suff: int = 30
    n_max: int = 60
    hard_safety_threshold: float = 0.95
    low_unsafe_threshold: float = 0.80
    high_safe_threshold: float = 0.80
    cycle1_target: float = 0.3

    def __post_init__(self):
        for name in ("hard_safety_threshold", "low_unsafe_threshold",
                     "high_safe_threshold", "cycle1_target"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0,1)")
        if self.c_suff < 1 or self.n_max < 1:
            raise ValueError("c_suff and n_max must be positive")


def beta_tail(events: float, n: float, threshold: float) -> float:
    """P(p > threshold) under Beta(1+events, 1+n-events)."""
    return float(1.0 - betainc(1.0 + events, 1.0 + n - events, threshold))


def admissible(pi_t_draws, pi_a_draws, targets: TargetSpec) -> bool:
    """Posterior admissibility: neither unsafe nor futile (strict)."""
    p_safe = float(np.mean(np.asarray(pi_t_draws) < targets.phi_t))
    p_active = float(np.mean(np.asarray(pi_a_draws) > targets.phi_a))
    return p_safe > targets.q_t and p_active > targets.q_a


def allowed_by_skipping(explored, candidate, start=None) -> bool:
    """Dose-skipping enforcement: no skipping levels within an agent and no
    simultaneous escalation of both agents beyond an explored combo."""
    ci, cj = tuple(candidate)
    if start is not None and (ci, cj) == tuple(start):
        return True
    for ei, ej in explored:
        if (ci <= ei + 1 and cj <= ej) or (ci <= ei and cj <= ej + 1):
            return True
    return False


def hard_safety_trigger(events: int, n: int, cfg: RuleConfig) -> bool:
    """Cycle-1 exclusion criterion; reproduces the 3/3, 4/6, 5/9 triggers."""
    if n == 0:
        return False
    return beta_tail(events, n, cfg.cycle1_target) > cfg.hard_safety_threshold


def hard_safety_exclusions(counts: dict, grid: DoseGrid, cfg: RuleConfig) -> set:
    """Upward-closed exclusion set from per-combo cycle-1 (events, n) counts."""
    excluded = set()
    for (i_star, j_star), (events, n) in counts.items():
        if hard_safety_trigger(events, n, cfg):
            for i in range(i_star, grid.I + 1):
                for j in range(j_star, grid.J + 1):
                    excluded.add((i, j))
    return excluded


def cycle1_counts(patients, now: float) -> dict:
    """Per-combo (cycle-1 DLT events, cycle-1 ascertained patients) at ``now``.

    A patient's cycle-1 status is ascertained once followed for a full cycle
    or as soon as a first-cycle DLT occurs.
    """
    counts = {}
    for p in patients:
        f = now - p.entry_time
        if f < 0:
            raise ValueError("negative follow-up in cycle-1 counts")
        t_tox = p.tox_time if p.tox_time is not None else np.inf
        event = t_tox <= min(f, 1.0)
        ascertained = event or f >= 1.0
        if not ascertained:
            continue
        k = p.combo.key()
        e, n = counts.get(k, (0, 0))
        counts[k] = (e + int(event), n + 1)
    return counts


def check_stopping(
    any_admissible: bool,
    counts: dict,
    n_per_combo: dict,
    recommended,
    n_total: int,
    grid: DoseGrid,
    cfg: RuleConfig,
    cohort_size: int,
):
    """First stopping rule that fires, in the listed order, else None."""
    # 1. no admissible dose combination anywhere on the grid
    if not any_admissible:
        return StopReason.NO_ADMISSIBLE
    # 2. lowest combo deemed unsafe on cycle-1 data
    low = (1, 1)
    if n_per_combo.get(low, 0) >= cohort_size:
        e, n = counts.get(low, (0, 0))
        if n > 0 and beta_tail(e, n, cfg.cycle1_target) > cfg.low_unsafe_threshold:
            return StopReason.LOWEST_UNSAFE
    # 3. highest combo deemed very safe on cycle-1 data
    high = (grid.I, grid.J)
    if n_per_combo.get(high, 0) >= cohort_size:
        e, n = counts.get(high, (0, 0))
        if n > 0 and 1.0 - beta_tail(e, n, cfg.cycle1_target) > cfg.high_safe_threshold:
            return StopReason.HIGHEST_VERY_SAFE
    # 4. sufficient information at the recommended combo
    if recommended is not None and n_per_combo.get(tuple(recommended), 0) >= cfg.c_suff:
        return StopReason.SUFFICIENT_INFORMATION
    # 5. lowest combo hit the hard-safety criterion
    e, n = counts.get(low, (0, 0))
    if hard_safety_trigger(e, n, cfg):
        return StopReason.HARD_SAFETY
    # 6. maximum patients recruited
    if n_total >= cfg.n_max:
        return StopReason.MAX_PATIENTS
    return None
