"""Grid-search prior calibration maximizing geometric-mean PCS.

Step 1 sweeps the safety prior with the activity model disabled (selection
by toxicity-target proximity); later rounds alternate activity and safety
sweeps on joint runs until the geometric-mean PCS improvement drops below
the bound.
"""

from __future__ import annotations

import copy
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .engine import TrialConfig, replicate_seed, run_trial
from .scenarios import ScenarioSpec

__all__ = ["CalibrationResult", "calibrate", "scenario_pcs"]


@dataclass
class TraceRow:
    round: int
    endpoint: str
    cell: tuple  # (c1, c2, v1, v2)
    scenario: str
    pcs: float
    gmean: float  # geometric mean across scenarios for this cell


@dataclass
class CalibrationResult:
    tox: tuple
    act: tuple
    gmean_pcs: float
    rounds: int
    trace: list = field(default_factory=list)


def _safety_correct(scenario: ScenarioSpec, phi_t: float):
    """Target combo for safety-only runs: explicit flag if present, else the
    combo whose true toxicity is closest to target (row-major tie break)."""
    if scenario.explicit_flags is not None:
        c = scenario.explicit_flags.get("correct")
        return None if c is None else tuple(c)
    dist = np.abs(scenario.p_tox - phi_t)
    i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
    return (int(i) + 1, int(j) + 1)


def scenario_pcs(results, scenario: ScenarioSpec, cfg: TrialConfig) -> float:
    """Proportion of replicates selecting the scenario's correct answer.

    In joint mode the correct answer comes from the model-utility
    classification; a none-recommendation is correct when no combo is
    acceptable. In safety-only mode the target is the closest-to-target
    combo.
    """
    if cfg.safety_only:
        correct = _safety_correct(scenario, cfg.targets.phi_t)
        hits = sum(1 for r in results if r.selection_combo() == correct)
    else:
        cls = scenario.classification(
            "model", cfg.utility, phi_t=cfg.targets.phi_t, phi_a=cfg.targets.phi_a)
        correct = cls.correct_combo()
        if correct is None:
            hits = sum(1 for r in results if r.selection_combo() is None)
        else:
            hits = sum(1 for r in results if r.selection_combo() == correct)
    return hits / len(results)


def _with_cell(cfg: TrialConfig, endpoint: str, cell) -> TrialConfig:
    out = copy.copy(cfg)
    cell = tuple(float(v) for v in cell)
    if cfg.design == "pocrm":
        h = cfg.pocrm_hyper
        out.pocrm_hyper = replace(h, **{("tox" if endpoint == "tox" else "act"): cell})
    elif cfg.design == "blrm":
        h = cfg.blrm_hyper
        # the four-value cell applies to both agents' priors for the endpoint
        if endpoint == "tox":
            out.blrm_hyper = replace(h, w1_tox=cell, w2_tox=cell)
        else:
            out.blrm_hyper = replace(h, w1_act=cell, w2_act=cell)
    else:
        raise ValueError("calibration applies to the model-based designs")
    return out


def _eval_cell(cfg, scenarios, reps, seed):
    pcs = []
    for scn in scenarios:
        results = [run_trial(scn, cfg, replicate_seed(seed, r)) for r in range(reps)]
        pcs.append(scenario_pcs(results, scn, cfg))
    gmean = float(np.exp(np.mean(np.log(np.maximum(pcs, 1e-300))))) if pcs else 0.0
    if any(p == 0.0 for p in pcs):
        gmean = 0.0
    return pcs, gmean


def _sweep(cfg, endpoint, grid_cells, scenarios, reps, seed, round_idx, trace):
    best_cell, best_gmean = None, -1.0
    for cell in grid_cells:
        cell = tuple(cell)
        cell_cfg = _with_cell(cfg, endpoint, cell)
        pcs, gmean = _eval_cell(cell_cfg, scenarios, reps, seed)
        for scn, p in zip(scenarios, pcs):
            trace.append(TraceRow(round_idx, endpoint, cell, scn.name, p, gmean))
        if gmean > best_gmean:  # strict: first argmax wins on ties
            best_cell, best_gmean = cell, gmean
    if best_gmean <= 0.0:
        warnings.warn(
            f"every {endpoint} cell scored zero PCS; keeping the first cell",
            RuntimeWarning,
        )
        best_cell = tuple(grid_cells[0])
        best_gmean = 0.0
    return best_cell, best_gmean


def calibrate(
    cfg: TrialConfig,
    safety_scenarios: list,
    joint_scenarios: list,
    tox_grid: list,
    act_grid: list,
    reps: int,
    seed: int,
    epsilon: float = 0.005,
    max_rounds: int = 5,
) -> CalibrationResult:
    """Alternating endpoint-wise grid search; see module docstring.

    The same replicate seeds are reused across cells so sweeps compare
    configurations on common randomness.
    """
    if not tox_grid or not act_grid:
        raise ValueError("calibration grids must be nonempty")
    trace: list = []

    # step 1: safety prior on safety-only runs
    cfg_safety = copy.copy(cfg)
    cfg_safety.safety_only = True
    tox_cell, _ = _sweep(cfg_safety, "tox", tox_grid, safety_scenarios, reps, seed, 0, trace)

    current = _with_cell(cfg, "tox", tox_cell)
    act_cell = tuple(act_grid[0])
    prev_gmean = -np.inf
    rounds = 0
    gmean = 0.0
    for rnd in range(1, max_rounds + 1):
        rounds = rnd
        act_cell, gmean = _sweep(current, "act", act_grid, joint_scenarios, reps, seed, rnd, trace)
        current = _with_cell(current, "act", act_cell)
        tox_cell, gmean = _sweep(current, "tox", tox_grid, joint_scenarios, reps, seed, rnd, trace)
        current = _with_cell(current, "tox", tox_cell)
        if len(tox_grid) == 1 and len(act_grid) == 1:
            break  # nothing left to sweep
        if gmean - prev_gmean < epsilon:
            break
        prev_gmean = gmean
    return CalibrationResult(tox=tox_cell, act=act_cell, gmean_pcs=gmean, rounds=rounds, trace=trace)
