"""Gumbel bivariate binary model linking the activity and toxicity marginals.

The four cell probabilities for outcomes (y_a, y_t) given weighted marginals
g_a, g_t and association psi are

    pi_ab = g_a^a (1-g_a)^(1-a) g_t^b (1-g_t)^(1-b)
            + (-1)^(a+b) g_a (1-g_a) g_t (1-g_t) tanh(psi/2),

which is a valid distribution for every real psi; psi = 0 gives independence
and positive psi positive correlation. This kernel is shared by both
model-based designs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["CellProbs", "gumbel_cells", "cell_prob", "joint_loglik", "CELL_FLOOR"]

# Log-domain guard: MCMC proposals can push marginals to the boundary.
CELL_FLOOR = 1e-300


@dataclass(frozen=True)
class CellProbs:
    """Joint cell probabilities indexed p[y_t][y_a]."""

    p00: float
    p01: float
    p10: float
    p11: float
    psi: float

    def as_array(self):
        return np.array([[self.p00, self.p01], [self.p10, self.p11]])

    def prob(self, y_t: int, y_a: int) -> float:
        return self.as_array()[y_t, y_a]


def gumbel_cells(g_a: float, g_t: float, psi: float) -> CellProbs:
    """All four joint cell probabilities for one patient."""
    corr = g_a * (1 - g_a) * g_t * (1 - g_t) * np.tanh(psi / 2.0)
    p00 = (1 - g_a) * (1 - g_t) + corr
    p01 = g_a * (1 - g_t) - corr
    p10 = (1 - g_a) * g_t - corr
    p11 = g_a * g_t + corr
    return CellProbs(p00, p01, p10, p11, psi)


def cell_prob(g_a, g_t, y_a, y_t, psi):
    """Vectorized probability of the observed cell for each record."""
    g_a = np.asarray(g_a, dtype=float)
    g_t = np.asarray(g_t, dtype=float)
    y_a = np.asarray(y_a)
    y_t = np.asarray(y_t)
    pa = np.where(y_a == 1, g_a, 1 - g_a)
    pt = np.where(y_t == 1, g_t, 1 - g_t)
    sign = np.where(y_a == y_t, 1.0, -1.0)
    corr = g_a * (1 - g_a) * g_t * (1 - g_t) * np.tanh(psi / 2.0)
    return pa * pt + sign * corr


def joint_loglik(records, psi: float) -> float:
    """Sum of log joint-cell probabilities over (g_a, g_t, y_a, y_t) records.

    Cells are floored at CELL_FLOOR before the log, so an impossible observed
    cell contributes a huge negative number rather than crashing.
    """
    if len(records) == 0:
        return 0.0
    arr = np.asarray([(r[0], r[1], r[2], r[3]) for r in records], dtype=float)
    cells = cell_prob(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], psi)
    return float(np.sum(np.log(np.maximum(cells, CELL_FLOOR))))
