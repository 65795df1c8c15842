"""Embedded scenario library and the scenario file format.

The 2x5 grid crosses six toxicity profiles (T1-T6) with six activity
profiles (A1-A6); the 3x3 grid ships six joint scenarios (S1-S6). All
probabilities are over the full tau = 3 cycle window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grid import DoseGrid
from .utility import (
    BoinUtilityTable,
    DoseClassification,
    UtilityWeights,
    classify_doses,
)

__all__ = [
    "ScenarioSpec",
    "GRID_2X5",
    "GRID_3X3",
    "scenario_names",
    "get_scenario",
    "load_scenario_file",
    "save_scenario_file",
    "TOX_2X5",
    "ACT_2X5",
    "S_3X3",
]

GRID_2X5 = DoseGrid((600.0, 1200.0), (50.0, 75.0, 100.0, 125.0, 150.0))
GRID_3X3 = DoseGrid((600.0, 1200.0, 1800.0), (50.0, 75.0, 100.0))

TOX_2X5 = {
    "T1": [[0.03, 0.07, 0.11, 0.15, 0.20], [0.05, 0.09, 0.13, 0.25, 0.30]],
    "T2": [[0.10, 0.15, 0.20, 0.30, 0.40], [0.45, 0.50, 0.55, 0.60, 0.60]],
    "T3": [[0.05, 0.08, 0.15, 0.20, 0.45], [0.10, 0.12, 0.30, 0.40, 0.50]],
    "T4": [[0.10, 0.20, 0.40, 0.50, 0.60], [0.30, 0.45, 0.55, 0.60, 0.60]],
    "T5": [[0.30, 0.45, 0.50, 0.55, 0.60], [0.40, 0.50, 0.55, 0.60, 0.60]],
    "T6": [[0.40, 0.40, 0.50, 0.50, 0.60], [0.40, 0.40, 0.50, 0.50, 0.60]],
}

ACT_2X5 = {
    "A1": [[0.20, 0.30, 0.35, 0.50, 0.55], [0.25, 0.40, 0.45, 0.60, 0.65]],
    "A2": [[0.30, 0.32, 0.38, 0.40, 0.46], [0.34, 0.36, 0.42, 0.44, 0.48]],
    "A3": [[0.06, 0.08, 0.12, 0.20, 0.30], [0.10, 0.15, 0.25, 0.35, 0.40]],
    "A4": [[0.05, 0.20, 0.30, 0.40, 0.50], [0.10, 0.25, 0.35, 0.45, 0.55]],
    "A5": [[0.10, 0.12, 0.14, 0.16, 0.18], [0.20, 0.30, 0.40, 0.50, 0.60]],
    "A6": [[0.10, 0.10, 0.10, 0.10, 0.10], [0.10, 0.10, 0.10, 0.10, 0.20]],
}

S_3X3 = {
    "S1": {
        "tox": [[0.10, 0.15, 0.20], [0.15, 0.20, 0.30], [0.20, 0.30, 0.45]],
        "act": [[0.05, 0.10, 0.15], [0.20, 0.25, 0.30], [0.35, 0.40, 0.45]],
    },
    "S2": {
        "tox": [[0.05, 0.09, 0.11], [0.07, 0.13, 0.25], [0.15, 0.20, 0.30]],
        "act": [[0.05, 0.08, 0.10], [0.10, 0.12, 0.15], [0.20, 0.30, 0.40]],
    },
    "S3": {
        "tox": [[0.05, 0.10, 0.15], [0.20, 0.25, 0.30], [0.40, 0.45, 0.50]],
        "act": [[0.10, 0.20, 0.30], [0.20, 0.30, 0.40], [0.30, 0.40, 0.50]],
    },
    "S4": {
        "tox": [[0.20, 0.25, 0.30], [0.40, 0.45, 0.50], [0.50, 0.55, 0.60]],
        "act": [[0.20, 0.25, 0.45], [0.30, 0.40, 0.50], [0.35, 0.50, 0.60]],
    },
    "S5": {
        "tox": [[0.05, 0.10, 0.20], [0.15, 0.25, 0.35], [0.30, 0.40, 0.45]],
        "act": [[0.05, 0.15, 0.30], [0.10, 0.25, 0.40], [0.20, 0.35, 0.45]],
    },
    "S6": {
        "tox": [[0.05, 0.20, 0.40], [0.10, 0.25, 0.45], [0.15, 0.30, 0.50]],
        "act": [[0.05, 0.20, 0.35], [0.10, 0.25, 0.40], [0.15, 0.30, 0.45]],
    },
}


@dataclass
class ScenarioSpec:
    """True per-combo window probabilities plus the cycle pattern.

    ``explicit_flags`` carries verbatim classification flags loaded from a
    scenario file; when absent, classification is computed from the
    probabilities.
    """

    name: str
    grid: DoseGrid
    p_tox: np.ndarray
    p_act: np.ndarray
    tau: int = 3
    tox_cycle1_fraction: float = 0.75
    act_split_equal: bool = True
    explicit_flags: Optional[dict] = None

    def __post_init__(self):
        self.p_tox = np.asarray(self.p_tox, dtype=float)
        self.p_act = np.asarray(self.p_act, dtype=float)
        shape = (self.grid.I, self.grid.J)
        if self.p_tox.shape != shape or self.p_act.shape != shape:
            raise ValueError(f"probability tables must have shape {shape}")
        if ((self.p_tox < 0) | (self.p_tox > 1)).any() or (
            (self.p_act < 0) | (self.p_act > 1)
        ).any():
            raise ValueError("probabilities must lie in [0,1]")
        if not 0.0 < self.tox_cycle1_fraction <= 1.0:
            raise ValueError("tox_cycle1_fraction must lie in (0,1]")

    def classification(
        self,
        convention: str = "model",
        weights: UtilityWeights = UtilityWeights(),
        boin_table: BoinUtilityTable = BoinUtilityTable(),
        phi_t: float = 0.3,
        phi_a: float = 0.2,
        eps_good: float | None = None,
    ) -> DoseClassification:
        computed = classify_doses(
            self.p_tox, self.p_act, convention, weights, boin_table,
            phi_t, phi_a, eps_good,
        )
        if self.explicit_flags is None:
            return computed
        f = self.explicit_flags
        acceptable = np.asarray(f["acceptable"], dtype=bool)
        good = np.asarray(f["good"], dtype=bool)
        correct = np.zeros_like(acceptable)
        if f.get("correct") is not None:
            ci, cj = f["correct"]
            correct[ci - 1, cj - 1] = True
        return DoseClassification(
            computed.safe, computed.active, acceptable, good, correct, computed.utility
        )

    def unsafe_mask(self, phi_t: float = 0.3) -> np.ndarray:
        return self.p_tox > phi_t

    def to_jsonable(self) -> dict:
        cls = self.classification()
        return {
            "name": self.name,
            "agent1_doses": list(self.grid.agent1_doses),
            "agent2_doses": list(self.grid.agent2_doses),
            "p_tox": self.p_tox.tolist(),
            "p_act": self.p_act.tolist(),
            "tau": self.tau,
            "tox_cycle1_fraction": self.tox_cycle1_fraction,
            "flags": {
                "acceptable": cls.acceptable.tolist(),
                "good": cls.good.tolist(),
                "correct": list(cls.correct_combo()) if cls.correct_combo() else None,
            },
        }


def scenario_names() -> list:
    """All 42 built-in names: 36 crossed 2x5 scenarios plus S1-S6."""
    names = [f"{t}.{a}" for t in sorted(TOX_2X5) for a in sorted(ACT_2X5)]
    return names + sorted(S_3X3)


def get_scenario(name: str) -> ScenarioSpec:
    if name in S_3X3:
        entry = S_3X3[name]
        return ScenarioSpec(name, GRID_3X3, np.array(entry["tox"]), np.array(entry["act"]))
    parts = name.split(".")
    if len(parts) == 2 and parts[0] in TOX_2X5 and parts[1] in ACT_2X5:
        return ScenarioSpec(
            name, GRID_2X5, np.array(TOX_2X5[parts[0]]), np.array(ACT_2X5[parts[1]])
        )
    raise KeyError(
        f"unknown scenario {name!r}; available: {', '.join(scenario_names())}"
    )


def load_scenario_file(path) -> ScenarioSpec:
    with open(path) as fh:
        obj = json.load(fh)
    try:
        grid = DoseGrid(tuple(obj["agent1_doses"]), tuple(obj["agent2_doses"]))
        spec = ScenarioSpec(
            name=obj.get("name", "custom"),
            grid=grid,
            p_tox=np.asarray(obj["p_tox"], dtype=float),
            p_act=np.asarray(obj["p_act"], dtype=float),
            tau=int(obj.get("tau", 3)),
            tox_cycle1_fraction=float(obj.get("tox_cycle1_fraction", 0.75)),
            explicit_flags=obj.get("flags"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed scenario file {path}: {exc}") from exc
    return spec


def save_scenario_file(spec: ScenarioSpec, path):
    with open(path, "w") as fh:
        json.dump(spec.to_jsonable(), fh, indent=2)
        fh.write("\n")
