"""Dosing grid, trial targets, and patient-level time-to-event bookkeeping.

All times are measured in treatment cycles. Event times stored on a
``PatientRecord`` are relative to that patient's entry time; the decision
clock (``now``) is absolute.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "DoseGrid",
    "DoseCombo",
    "TargetSpec",
    "PatientRecord",
    "Outcome",
    "compute_weights",
]


@dataclass(frozen=True)
class DoseCombo:
    """A dose combination d_ij, 1-based in both agents."""

    i: int
    j: int

    def key(self):
        return (self.i, self.j)

    def label(self):
        return f"d{self.i}{self.j}"


@dataclass(frozen=True)
class DoseGrid:
    """Physical dose levels for both agents.

    agent1_doses are in mg, agent2_doses in kBq/kg; both must be strictly
    increasing.
    """

    agent1_doses: tuple
    agent2_doses: tuple

    def __post_init__(self):
        a1 = tuple(float(d) for d in self.agent1_doses)
        a2 = tuple(float(d) for d in self.agent2_doses)
        object.__setattr__(self, "agent1_doses", a1)
        object.__setattr__(self, "agent2_doses", a2)
        if len(a1) < 1 or len(a2) < 1:
            raise ValueError("each agent needs at least one dose level")
        if any(x >= y for x, y in zip(a1, a1[1:])) or any(
            x >= y for x, y in zip(a2, a2[1:])
        ):
            raise ValueError("doses must be strictly increasing within each agent")

    @property
    def I(self):  # noqa: E743 - matches the d_ij labelling
        return len(self.agent1_doses)

    @property
    def J(self):
        return len(self.agent2_doses)

    @property
    def n_combos(self):
        return self.I * self.J

    def combos(self):
        """All combos in row-major order (i outer, j inner)."""
        return [
            DoseCombo(i, j)
            for i in range(1, self.I + 1)
            for j in range(1, self.J + 1)
        ]

    def contains(self, combo: DoseCombo) -> bool:
        return 1 <= combo.i <= self.I and 1 <= combo.j <= self.J

    def require(self, combo: DoseCombo):
        if not self.contains(combo):
            raise ValueError(f"combo {combo.label()} outside {self.I}x{self.J} grid")

    def index(self, combo: DoseCombo) -> int:
        """Row-major flat index of a combo."""
        self.require(combo)
        return (combo.i - 1) * self.J + (combo.j - 1)

    def doses(self, combo: DoseCombo):
        self.require(combo)
        return (self.agent1_doses[combo.i - 1], self.agent2_doses[combo.j - 1])


@dataclass(frozen=True)
class TargetSpec:
    """Trial targets over the follow-up window of ``tau`` cycles."""

    phi_t: float = 0.3
    phi_a: float = 0.2
    q_t: float = 0.2
    q_a: float = 0.2
    tau: int = 3

    def __post_init__(self):
        for name in ("phi_t", "phi_a", "q_t", "q_a"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0,1), got {v}")
        if self.tau < 1:
            raise ValueError("tau must be >= 1 cycle")


@dataclass
class PatientRecord:
    """One enrolled patient.

    ``tox_time``/``act_time`` are event times in cycles since entry, or None
    if the event never occurs. Times beyond the follow-up window are kept as
    generated; ``compute_weights`` treats them as unobserved.
    """

    combo: DoseCombo
    entry_time: float
    tox_time: Optional[float] = None
    act_time: Optional[float] = None
    cohort: int = 0

    def __post_init__(self):
        if self.entry_time < 0:
            raise ValueError("entry_time must be >= 0")


@dataclass(frozen=True)
class Outcome:
    """Binary outcomes, follow-up weights and ascertainment flags at a query time."""

    y_t: int
    w_t: float
    delta_t: int
    y_a: int
    w_a: float
    delta_a: int


def compute_weights(patient: PatientRecord, now: float, tau: float) -> Outcome:
    """Time-to-event outcomes and weights for one patient at clock time ``now``.

    Weights are the proportion of total follow-up, set to 1 once the event is
    observed. An activity observation is censored by an earlier DLT: the
    patient then counts as a finalized non-response with weight
    (DLT time - entry time) / tau.
    """
    follow = now - patient.entry_time
    if follow < 0:
        raise ValueError(f"negative follow-up: now={now} < entry={patient.entry_time}")
    f = min(follow, tau)

    t_tox = patient.tox_time if patient.tox_time is not None else np.inf
    t_act = patient.act_time if patient.act_time is not None else np.inf

    if t_tox <= f:
        y_t, w_t, delta_t = 1, 1.0, 1
    else:
        y_t, w_t, delta_t = 0, f / tau, int(f >= tau)

    if t_act <= f and t_act <= t_tox:
        y_a, w_a, delta_a = 1, 1.0, 1
    elif t_tox <= f and t_tox < t_act:
        # DLT before any activity response: censored, ascertained as no-activity
        y_a, w_a, delta_a = 0, t_tox / tau, 1
    else:
        y_a, w_a, delta_a = 0, f / tau, int(f >= tau)

    return Outcome(y_t, w_t, delta_t, y_a, w_a, delta_a)
