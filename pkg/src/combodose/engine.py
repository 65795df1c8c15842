"""Trial orchestration: cohort scheduling on the cycle clock, per-decision
design invocation, enforcement and stopping rules, and final selection.

A trial enrolls cohorts one cycle apart. At each decision the design is
refit on all follow-up accrued so far; the next cohort goes to the
design's recommended combo among combos that are admissible, reachable
without dose skipping, and not excluded by hard safety. Selection happens
only for trials that end by sufficient information or maximum patients, and
uses complete follow-up of everyone enrolled.
"""

from __future__ import annotations

import concurrent.futures as _futures
import copy as _copy
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from . import blrm as _blrm
from . import boin12 as _boin12
from . import pocrm as _pocrm
from .datagen import scenario_params, generate_patient
from .grid import DoseCombo, DoseGrid, PatientRecord, TargetSpec
from .pocrm import ObservedData
from .rules import (
    RuleConfig,
    StopReason,
    admissible,
    allowed_by_skipping,
    check_stopping,
    cycle1_counts,
    hard_safety_exclusions,
)
from .sampler import SamplerConfig
from .scenarios import ScenarioSpec
from .utility import BoinUtilityTable, UtilityWeights, utility_model_based

__all__ = [
    "TrialConfig",
    "DecisionRecord",
    "TrialResult",
    "Recommendation",
    "run_trial",
    "recommend_next",
    "simulate_many",
    "aggregate_results",
    "aggregate_selections",
    "replay_decisions",
]

DESIGNS = ("pocrm", "blrm", "boin12")

# stop reasons after which an OBD is still selected at full follow-up
_SELECTING_STOPS = (StopReason.SUFFICIENT_INFORMATION, StopReason.MAX_PATIENTS)


@dataclass
class TrialConfig:
    design: str = "pocrm"
    grid: DoseGrid = None
    cohort_size: int = 3
    start: tuple = (2, 2)
    targets: TargetSpec = field(default_factory=TargetSpec)
    rules: RuleConfig = field(default_factory=RuleConfig)
    utility: UtilityWeights = field(default_factory=UtilityWeights)
    boin_table: BoinUtilityTable = field(default_factory=BoinUtilityTable)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    pocrm_hyper: _pocrm.PocrmHyper = field(default_factory=_pocrm.PocrmHyper)
    blrm_hyper: _blrm.BlrmHyper = field(default_factory=_blrm.BlrmHyper)
    boin_phi1: Optional[float] = None
    boin_phi2: Optional[float] = None
    safety_only: bool = False

    def __post_init__(self):
        if self.design not in DESIGNS:
            raise ValueError(f"design must be one of {DESIGNS}")
        if self.cohort_size < 1:
            raise ValueError("cohort_size must be >= 1")
        if self.safety_only and self.design == "boin12":
            raise ValueError("safety-only mode applies to the model-based designs")

    def start_combo(self) -> DoseCombo:
        c = DoseCombo(*self.start)
        if self.grid is not None:
            self.grid.require(c)
        return c


@dataclass
class DecisionRecord:
    index: int
    now: float
    seed: int
    recommended: Optional[tuple]
    stop: Optional[str]
    admissible: list
    excluded: list
    summaries: dict  # combo key (as "i,j") -> per-combo posterior summary
    orderings: Optional[tuple] = None  # (m_a, m_t) for the pocrm fit


@dataclass
class TrialResult:
    design: str
    scenario: str
    seed: int
    assignments: list  # per patient: dict(patient, cohort, i, j, entry, t_tox, t_act)
    decisions: list
    stop_reason: str
    selection: Optional[tuple]
    n_total: int
    n_unsafe: int

    def selection_combo(self):
        return None if self.selection is None else tuple(self.selection)


@dataclass
class Recommendation:
    """recommend-mode output: either the next combo or a stop."""

    action: str  # "assign" | "stop"
    combo: Optional[tuple]
    stop_reason: Optional[str]
    summaries: dict
    admissible: list
    excluded: list


@dataclass
class _Evaluation:
    admissible: dict  # key -> bool
    criterion: dict  # key -> float, larger is better
    summaries: dict
    orderings: Optional[tuple] = None
    stats: Optional[dict] = None  # boin12 per-combo stats


def _patient_rng(seed, patient_index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 1, patient_index))))


def _fit_seed(seed, decision_index):
    return int(np.random.SeedSequence((seed, 2, decision_index)).generate_state(1, np.uint64)[0])


def _summary(pi_t, pi_a, criterion, adm):
    qs_t = np.quantile(pi_t, (0.05, 0.5, 0.95))
    if np.all(np.isnan(pi_a)):
        qs_a = (float("nan"),) * 3
    else:
        qs_a = tuple(np.quantile(pi_a, (0.05, 0.5, 0.95)))
    return {
        "pi_t": {"q05": float(qs_t[0]), "median": float(qs_t[1]), "q95": float(qs_t[2])},
        "pi_a": {"q05": float(qs_a[0]), "median": float(qs_a[1]), "q95": float(qs_a[2])},
        "criterion": float(criterion),
        "admissible": bool(adm),
    }


def _evaluate(cfg: TrialConfig, grid: DoseGrid, data: ObservedData, seed: int,
              skeletons=None, orderings=None) -> _Evaluation:
    """Fit the configured design and score every combo."""
    combos = grid.combos()
    keys = [c.key() for c in combos]
    t = cfg.targets

    if cfg.design == "boin12":
        u_b = _boin12.utility_threshold(cfg.boin_table, t.phi_t, t.phi_a)
        adm, crit, summ, stats = {}, {}, {}, {}
        for k in keys:
            st = _boin12.combo_stats(data, k, cfg.boin_table)
            stats[k] = st
            adm[k] = _boin12.beta_binomial_admissible(data, k, t)
            crit[k] = _boin12.utility_exceedance(st.x, st.n, u_b)
            summ[f"{k[0]},{k[1]}"] = {
                "n": st.n, "x": st.x,
                "pi_hat_t": st.pi_hat_t, "pi_hat_a": st.pi_hat_a,
                "criterion": crit[k], "admissible": adm[k],
            }
        return _Evaluation(adm, crit, summ, stats=stats)

    if cfg.design == "pocrm":
        if skeletons is None:
            skeletons = _pocrm.default_skeletons(grid)
        if orderings is None:
            orderings = _pocrm.default_orderings(grid.I, grid.J)
        skel_a, skel_t = skeletons
        post_t = _pocrm.ordering_posterior(
            data, skel_t, orderings, cfg.pocrm_hyper.alpha_sd, "toxicity")
        if cfg.safety_only:
            m_t = int(np.argmax(post_t))
            fit = _pocrm.pocrm_fit_tox_only(
                data, grid, m_t, skel_t, orderings, cfg.pocrm_hyper, cfg.sampler, seed)
            m_pair = (-1, m_t)
        else:
            post_a = _pocrm.ordering_posterior(
                data, skel_a, orderings, cfg.pocrm_hyper.alpha_sd, "activity")
            m_a, m_t = _pocrm.select_orderings(post_a, post_t)
            fit = _pocrm.pocrm_fit(
                data, grid, m_a, m_t, skel_a, skel_t, orderings,
                cfg.pocrm_hyper, cfg.sampler, seed)
            m_pair = (m_a, m_t)
    else:
        if cfg.safety_only:
            fit = _blrm.blrm_fit_tox_only(data, grid, cfg.blrm_hyper, cfg.sampler, seed)
        else:
            fit = _blrm.blrm_fit(data, grid, cfg.blrm_hyper, cfg.sampler, seed)
        m_pair = None

    adm, crit, summ = {}, {}, {}
    for idx, k in enumerate(keys):
        pi_t = fit.pi_t[:, idx]
        pi_a = fit.pi_a[:, idx]
        if cfg.safety_only:
            ok = float(np.mean(pi_t < t.phi_t)) > t.q_t
            score = -abs(float(np.median(pi_t)) - t.phi_t)
        else:
            ok = admissible(pi_t, pi_a, t)
            score = float(np.mean(utility_model_based(pi_a, pi_t, cfg.utility, t.phi_t)))
        adm[k] = ok
        crit[k] = score
        summ[f"{k[0]},{k[1]}"] = _summary(pi_t, pi_a, score, ok)
    return _Evaluation(adm, crit, summ, orderings=m_pair)


def _recommend(cfg: TrialConfig, grid: DoseGrid, ev: _Evaluation, allowed: set,
               current: DoseCombo):
    """The design's proposed next combo among allowed keys, or None."""
    if cfg.design == "boin12":
        t = cfg.targets
        bounds = _boin12.boin_boundaries(t.phi_t, cfg.boin_phi1, cfg.boin_phi2)
        u_b = _boin12.utility_threshold(cfg.boin_table, t.phi_t, t.phi_a)
        nxt = _boin12.boin12_next_dose(current, ev.stats, bounds, allowed, u_b, grid)
        return None if nxt is None else nxt.key()
    best, best_score = None, None
    for k in sorted(allowed):
        score = ev.criterion[k]
        if best_score is None or score > best_score:
            best, best_score = k, score
    return best


def _allowed_set(ev: _Evaluation, explored, excluded, start):
    out = set()
    for k, ok in ev.admissible.items():
        if not ok or k in excluded:
            continue
        if allowed_by_skipping(explored, k, start=start):
            out.add(k)
    return out


def run_trial(scenario: ScenarioSpec, cfg: TrialConfig, seed: int) -> TrialResult:
    """Simulate one trial replicate; deterministic given (scenario, cfg, seed)."""
    grid = scenario.grid
    if cfg.grid is not None and cfg.grid != grid:
        raise ValueError("config grid does not match scenario grid")
    start = DoseCombo(*cfg.start)
    grid.require(start)
    tau = float(cfg.targets.tau)
    params = scenario_params(scenario)

    skeletons = orderings = None
    if cfg.design == "pocrm":
        skeletons = _pocrm.default_skeletons(grid)
        orderings = _pocrm.default_orderings(grid.I, grid.J)

    patients: list[PatientRecord] = []
    n_per_combo: dict = {}
    cohort = 0

    def enroll(combo: DoseCombo, entry: float):
        nonlocal cohort
        cohort += 1
        for _ in range(cfg.cohort_size):
            idx = len(patients)
            t_t, t_a = generate_patient(params[combo.key()], _patient_rng(seed, idx))
            patients.append(PatientRecord(
                combo, entry,
                tox_time=None if np.isinf(t_t) else t_t,
                act_time=None if np.isinf(t_a) else t_a,
                cohort=cohort,
            ))
        n_per_combo[combo.key()] = n_per_combo.get(combo.key(), 0) + cfg.cohort_size

    enroll(start, 0.0)
    current = start
    decisions = []
    stop = None
    k = 0
    while stop is None:
        k += 1
        now = patients[-1].entry_time + 1.0
        fit_seed = _fit_seed(seed, k)
        data = ObservedData.from_patients(patients, now, tau)
        ev = _evaluate(cfg, grid, data, fit_seed, skeletons, orderings)
        counts = cycle1_counts(patients, now)
        excluded = hard_safety_exclusions(counts, grid, cfg.rules)
        allowed = _allowed_set(ev, set(n_per_combo), excluded, cfg.start)
        rec = _recommend(cfg, grid, ev, allowed, current)
        stop = check_stopping(
            any(ev.admissible.values()), counts, n_per_combo, rec,
            len(patients), grid, cfg.rules, cfg.cohort_size,
        )
        if stop is None and rec is None:
            stop = StopReason.NO_ASSIGNABLE
        decisions.append(DecisionRecord(
            index=k, now=now, seed=fit_seed,
            recommended=rec, stop=stop.value if stop else None,
            admissible=sorted(key for key, ok in ev.admissible.items() if ok),
            excluded=sorted(excluded),
            summaries=ev.summaries,
            orderings=ev.orderings,
        ))
        if stop is None:
            current = DoseCombo(*rec)
            enroll(current, now)

    selection = None
    if stop in _SELECTING_STOPS:
        selection = select_final(cfg, grid, patients, seed, skeletons, orderings)

    unsafe = scenario.unsafe_mask(cfg.targets.phi_t)
    n_unsafe = sum(int(unsafe[p.combo.i - 1, p.combo.j - 1]) for p in patients)
    assignments = [
        {
            "patient": i, "cohort": p.cohort, "i": p.combo.i, "j": p.combo.j,
            "entry": p.entry_time, "t_tox": p.tox_time, "t_act": p.act_time,
        }
        for i, p in enumerate(patients)
    ]
    return TrialResult(
        design=cfg.design, scenario=scenario.name, seed=seed,
        assignments=assignments, decisions=decisions,
        stop_reason=stop.value, selection=selection,
        n_total=len(patients), n_unsafe=n_unsafe,
    )


def select_final(cfg: TrialConfig, grid: DoseGrid, patients, seed,
                 skeletons=None, orderings=None):
    """Design criterion over admissible combos at full follow-up, or None.

    The interval design only selects among combos that treated patients;
    the model-based designs may select any admissible combo.
    """
    if not patients:
        return None
    tau = float(cfg.targets.tau)
    now = max(p.entry_time for p in patients) + tau
    data = ObservedData.from_patients(patients, now, tau)
    ev = _evaluate(cfg, grid, data, _fit_seed(seed, 0), skeletons, orderings)
    counts = cycle1_counts(patients, now)
    excluded = hard_safety_exclusions(counts, grid, cfg.rules)
    tried = {p.combo.key() for p in patients}
    best, best_score = None, None
    for k, ok in ev.admissible.items():
        if not ok or k in excluded:
            continue
        if cfg.design == "boin12" and k not in tried:
            continue
        score = ev.criterion[k]
        if best_score is None or score > best_score:
            best, best_score = k, score
    return best


def recommend_next(cfg: TrialConfig, patients, now: float, seed: int = 0) -> Recommendation:
    """One decision on externally supplied data; same path as inside run_trial."""
    grid = cfg.grid
    if grid is None:
        raise ValueError("recommend mode requires cfg.grid")
    start = DoseCombo(*cfg.start)
    grid.require(start)
    for p in patients:
        grid.require(p.combo)
    if not patients:
        return Recommendation("assign", start.key(), None, {}, [], [])

    tau = float(cfg.targets.tau)
    current = max(patients, key=lambda p: p.entry_time).combo
    n_per_combo = {}
    for p in patients:
        n_per_combo[p.combo.key()] = n_per_combo.get(p.combo.key(), 0) + 1
    data = ObservedData.from_patients(patients, now, tau)
    ev = _evaluate(cfg, grid, data, seed)
    counts = cycle1_counts(patients, now)
    excluded = hard_safety_exclusions(counts, grid, cfg.rules)
    allowed = _allowed_set(ev, set(n_per_combo), excluded, cfg.start)
    rec = _recommend(cfg, grid, ev, allowed, current)
    stop = check_stopping(
        any(ev.admissible.values()), counts, n_per_combo, rec,
        len(patients), grid, cfg.rules, cfg.cohort_size,
    )
    admissible_keys = sorted(k for k, ok in ev.admissible.items() if ok)
    if stop is not None:
        return Recommendation("stop", None, stop.value, ev.summaries,
                              admissible_keys, sorted(excluded))
    if rec is None:
        return Recommendation("stop", None, StopReason.NO_ASSIGNABLE.value,
                              ev.summaries, admissible_keys, sorted(excluded))
    return Recommendation("assign", rec, None, ev.summaries,
                          admissible_keys, sorted(excluded))


def replay_decisions(result: TrialResult, scenario: ScenarioSpec, cfg: TrialConfig):
    """Re-run every logged decision from the logged data; returns the replayed
    (recommended, stop) pairs for audit comparison."""
    grid = scenario.grid
    replayed = []
    cfg_with_grid = cfg if cfg.grid is not None else _replace_grid(cfg, grid)
    for dec in result.decisions:
        pts = [
            PatientRecord(DoseCombo(a["i"], a["j"]), a["entry"],
                          a["t_tox"], a["t_act"], a["cohort"])
            for a in result.assignments
            if a["entry"] < dec.now
        ]
        r = recommend_next(cfg_with_grid, pts, dec.now, seed=dec.seed)
        replayed.append((r.combo, r.stop_reason))
    return replayed


def _replace_grid(cfg: TrialConfig, grid: DoseGrid) -> TrialConfig:
    out = _copy.copy(cfg)
    out.grid = grid
    return out


# ---------------------------------------------------------------------------
# replicate harness and operating-characteristic aggregation

def _run_one(args):
    scenario, cfg, seed = args
    return run_trial(scenario, cfg, seed)


def replicate_seed(master_seed: int, replicate: int) -> int:
    return int(np.random.SeedSequence((master_seed, replicate)).generate_state(1, np.uint64)[0])


def simulate_many(scenario: ScenarioSpec, cfg: TrialConfig, n_replicates: int,
                  master_seed: int, threads: int = 1) -> list:
    """Independent replicates with per-replicate derived seeds."""
    if n_replicates < 1:
        raise ValueError("n_replicates must be >= 1")
    jobs = [(scenario, cfg, replicate_seed(master_seed, r)) for r in range(n_replicates)]
    if threads <= 1 or n_replicates == 1:
        return [_run_one(j) for j in jobs]
    results = []
    with _futures.ProcessPoolExecutor(max_workers=threads) as ex:
        chunk = max(1, n_replicates // (threads * 4))
        results = list(ex.map(_run_one, jobs, chunksize=chunk))
    return results


def aggregate_results(results, scenario: ScenarioSpec, cfg: TrialConfig) -> dict:
    """Operating characteristics over replicates, classified by the design's
    utility convention."""
    convention = "boin" if cfg.design == "boin12" else "model"
    return aggregate_selections(
        results, scenario, convention, cfg.utility, cfg.boin_table,
        cfg.targets.phi_t, cfg.targets.phi_a, design_label=cfg.design,
    )


def aggregate_selections(
    results,
    scenario: ScenarioSpec,
    convention: str = "model",
    weights: UtilityWeights = UtilityWeights(),
    boin_table: BoinUtilityTable = BoinUtilityTable(),
    phi_t: float = 0.3,
    phi_a: float = 0.2,
    design_label: str = None,
) -> dict:
    """Operating characteristics over replicates.

    For scenarios with no acceptable combo, a none-selection counts as the
    correct action.
    """
    cls = scenario.classification(convention, weights, boin_table, phi_t, phi_a)
    n = len(results)
    none_is_correct = not cls.acceptable.any()
    counts = {"correct": 0, "good": 0, "acceptable": 0, "none": 0}
    sel_hist: dict = {}
    stop_hist: dict = {}
    tot_n = tot_unsafe = 0
    for r in results:
        stop_hist[r.stop_reason] = stop_hist.get(r.stop_reason, 0) + 1
        tot_n += r.n_total
        tot_unsafe += r.n_unsafe
        sel = r.selection_combo()
        if sel is None:
            counts["none"] += 1
            if none_is_correct:
                counts["correct"] += 1
                counts["good"] += 1
            sel_hist["none"] = sel_hist.get("none", 0) + 1
            continue
        i, j = sel[0] - 1, sel[1] - 1
        sel_hist[f"d{sel[0]}{sel[1]}"] = sel_hist.get(f"d{sel[0]}{sel[1]}", 0) + 1
        if cls.correct[i, j]:
            counts["correct"] += 1
        if cls.good[i, j]:
            counts["good"] += 1
        if cls.acceptable[i, j]:
            counts["acceptable"] += 1
    return {
        "design": design_label or (results[0].design if results else "unknown"),
        "scenario": scenario.name,
        "replicates": n,
        "pct_correct": 100.0 * counts["correct"] / n,
        "pct_good": 100.0 * counts["good"] / n,
        "pct_acceptable": 100.0 * counts["acceptable"] / n,
        "pct_none": 100.0 * counts["none"] / n,
        "mean_n": tot_n / n,
        "mean_n_unsafe": tot_unsafe / n,
        "stop_reasons": dict(sorted(stop_hist.items())),
        "selections": dict(sorted(sel_hist.items())),
    }
