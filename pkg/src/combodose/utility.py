"""Utility functions and true-dose classification.

Two utility conventions coexist: the trade-off utility used by the
model-based designs (activity minus weighted toxicity with an overdose
penalty) and the 0-100 outcome-score utility used by the interval design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "UtilityWeights",
    "BoinUtilityTable",
    "utility_model_based",
    "utility_boin_true",
    "DoseClassification",
    "classify_doses",
    "EPS_GOOD_MODEL",
    "EPS_GOOD_BOIN",
]

# Tolerances below the maximum utility within which an acceptable combo
# still counts as "good" (non-strict), per utility scale.
EPS_GOOD_MODEL = 0.1
EPS_GOOD_BOIN = 5.0


@dataclass(frozen=True)
class UtilityWeights:
    """Trade-off weights for the model-based utility.

    ``penalty_form`` selects how the overdose indicator enters: "fixed"
    subtracts omega2 itself once toxicity exceeds the target, "scaled"
    subtracts omega2 * pi_t.
    """

    omega1: float = 0.33
    omega2: float = 1.09
    penalty_form: str = "fixed"

    def __post_init__(self):
        if self.omega1 < 0 or self.omega2 < 0:
            raise ValueError("utility weights must be nonnegative")
        if self.penalty_form not in ("fixed", "scaled"):
            raise ValueError("penalty_form must be 'fixed' or 'scaled'")


@dataclass(frozen=True)
class BoinUtilityTable:
    """Outcome scores psi[y_t][y_a] on the 0-100 scale."""

    psi01: float = 100.0
    psi00: float = 40.0
    psi10: float = 0.0
    psi11: float = 60.0

    def __post_init__(self):
        ok = (
            self.psi01 >= self.psi00 >= self.psi10
            and self.psi01 >= self.psi11 >= self.psi10
        )
        if not ok:
            raise ValueError("scores must satisfy psi01 >= psi00,psi11 >= psi10")

    def score(self, y_t: int, y_a: int) -> float:
        return (
            (self.psi10 if y_a == 0 else self.psi11)
            if y_t
            else (self.psi00 if y_a == 0 else self.psi01)
        )


def utility_model_based(pi_a, pi_t, weights: UtilityWeights, phi_t: float):
    """Trade-off utility; indicator is strict (pi_t == phi_t carries no penalty).

    Accepts scalars or arrays.
    """
    pi_a = np.asarray(pi_a, dtype=float)
    pi_t = np.asarray(pi_t, dtype=float)
    over = pi_t > phi_t
    if weights.penalty_form == "scaled":
        penalty = weights.omega2 * pi_t * over
    else:
        penalty = weights.omega2 * over
    out = pi_a - weights.omega1 * pi_t - penalty
    return float(out) if out.ndim == 0 else out


def utility_boin_true(pi_a, pi_t, table: BoinUtilityTable):
    """Expected outcome score under independent activity/toxicity marginals."""
    pi_a = np.asarray(pi_a, dtype=float)
    pi_t = np.asarray(pi_t, dtype=float)
    out = (
        table.psi01 * pi_a * (1 - pi_t)
        + table.psi00 * (1 - pi_a) * (1 - pi_t)
        + table.psi11 * pi_a * pi_t
        + table.psi10 * (1 - pi_a) * pi_t
    )
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DoseClassification:
    """Per-combo truth flags, all arrays shaped (I, J)."""

    safe: np.ndarray
    active: np.ndarray
    acceptable: np.ndarray
    good: np.ndarray
    correct: np.ndarray  # boolean mask; at most one True
    utility: np.ndarray

    def correct_combo(self):
        """(i, j) of the correct combo, 1-based, or None."""
        idx = np.argwhere(self.correct)
        if idx.size == 0:
            return None
        return (int(idx[0][0]) + 1, int(idx[0][1]) + 1)


def classify_doses(
    p_tox: np.ndarray,
    p_act: np.ndarray,
    convention: str = "model",
    weights: UtilityWeights = UtilityWeights(),
    boin_table: BoinUtilityTable = BoinUtilityTable(),
    phi_t: float = 0.3,
    phi_a: float = 0.2,
    eps_good: float | None = None,
) -> DoseClassification:
    """Classify every combo of a scenario as safe/active/acceptable/good/correct.

    A combo is safe iff its true toxicity probability is <= phi_t and active
    iff its true activity probability is >= phi_a. The correct combo is the
    acceptable utility maximizer (row-major tie break); good combos are
    acceptable combos within ``eps_good`` of the maximum (non-strict).
    """
    p_tox = np.asarray(p_tox, dtype=float)
    p_act = np.asarray(p_act, dtype=float)
    if convention == "model":
        util = utility_model_based(p_act, p_tox, weights, phi_t)
        eps = EPS_GOOD_MODEL if eps_good is None else eps_good
    elif convention == "boin":
        util = utility_boin_true(p_act, p_tox, boin_table)
        eps = EPS_GOOD_BOIN if eps_good is None else eps_good
    else:
        raise ValueError(f"unknown utility convention {convention!r}")

    safe = p_tox <= phi_t
    active = p_act >= phi_a
    acceptable = safe & active
    good = np.zeros_like(acceptable)
    correct = np.zeros_like(acceptable)
    if acceptable.any():
        masked = np.where(acceptable, util, -np.inf)
        best_flat = int(np.argmax(masked))  # row-major, first max wins
        best = np.unravel_index(best_flat, util.shape)
        correct[best] = True
        # non-strict boundary with float slack: utilities come from rounded
        # decimal probabilities and can miss the cutoff by one ulp
        good = acceptable & (util >= masked[best] - eps - 1e-9)
    return DoseClassification(safe, active, acceptable, good, correct, util)
