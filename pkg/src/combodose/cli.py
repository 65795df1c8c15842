"""Command-line surface: scenario library, simulation campaigns, benchmark,
calibration, and the per-decision trial-conduct recommender.

Exit codes: 0 ok, 2 usage or validation error, 3 runtime failure. The
COMBODOSE_SEED environment variable overrides --seed when set.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .benchmark import run_benchmark
from .blrm import BlrmHyper
from .calibrate import calibrate
from .engine import (
    TrialConfig,
    aggregate_results,
    aggregate_selections,
    recommend_next,
    simulate_many,
)
from .grid import DoseCombo, DoseGrid, PatientRecord, TargetSpec
from .pocrm import PocrmHyper
from .rules import RuleConfig
from .sampler import SamplerConfig
from .scenarios import get_scenario, load_scenario_file, scenario_names
from .utility import BoinUtilityTable, UtilityWeights, utility_boin_true, utility_model_based


class ValidationError(Exception):
    pass


def _resolve_scenario(name_or_path):
    if os.path.exists(name_or_path):
        return load_scenario_file(name_or_path)
    try:
        return get_scenario(name_or_path)
    except KeyError as exc:
        raise ValidationError(str(exc.args[0])) from exc


def _seed_from(args):
    env = os.environ.get("COMBODOSE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"COMBODOSE_SEED must be an integer, got {env!r}") from exc
    return args.seed


def _config_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _provenance(seed, config_obj):
    return {"version": __version__, "seed": seed, "config_hash": _config_hash(config_obj)}


def _build_config(args, grid=None) -> TrialConfig:
    sampler = SamplerConfig(
        burn_in=args.burn_in, keep=args.keep, seed=getattr(args, "seed", 0) or 0,
    )
    return TrialConfig(
        design=args.design,
        grid=grid,
        cohort_size=args.cohort_size,
        utility=UtilityWeights(penalty_form=args.penalty_form),
        sampler=sampler,
        blrm_hyper=BlrmHyper(dose_scaling=args.dose_scaling),
    )


def _write_assignments_csv(path, results):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["replicate", "patient", "cohort", "i", "j", "entry", "t_tox", "t_act"])
        for rep, res in enumerate(results):
            for a in res.assignments:
                w.writerow([
                    rep, a["patient"], a["cohort"], a["i"], a["j"], a["entry"],
                    "" if a["t_tox"] is None else a["t_tox"],
                    "" if a["t_act"] is None else a["t_act"],
                ])


def _write_replicates_csv(path, results):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["replicate", "design", "scenario", "seed", "stop_reason",
                    "selection_i", "selection_j", "n_total", "n_unsafe"])
        for rep, res in enumerate(results):
            sel = res.selection_combo()
            w.writerow([
                rep, res.design, res.scenario, res.seed, res.stop_reason,
                "" if sel is None else sel[0], "" if sel is None else sel[1],
                res.n_total, res.n_unsafe,
            ])


def cmd_simulate(args):
    scenario = _resolve_scenario(args.scenario)
    if args.replicates < 1:
        raise ValidationError("--replicates must be >= 1")
    seed = _seed_from(args)
    cfg = _build_config(args)
    threads = args.threads or (os.cpu_count() or 1)
    results = simulate_many(scenario, cfg, args.replicates, seed, threads=threads)
    agg = aggregate_results(results, scenario, cfg)
    os.makedirs(args.out, exist_ok=True)
    stem = f"{args.design}_{scenario.name.replace('.', '_')}"
    _write_assignments_csv(os.path.join(args.out, f"{stem}_assignments.csv"), results)
    _write_replicates_csv(os.path.join(args.out, f"{stem}_replicates.csv"), results)
    payload = {
        "provenance": _provenance(seed, {
            "command": "simulate", "design": args.design, "scenario": scenario.name,
            "replicates": args.replicates, "cohort_size": args.cohort_size,
            "penalty_form": args.penalty_form, "dose_scaling": args.dose_scaling,
            "burn_in": args.burn_in, "keep": args.keep,
        }),
        "aggregate": agg,
    }
    out_json = os.path.join(args.out, f"{stem}_aggregate.json")
    with open(out_json, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(json.dumps(payload, indent=2))
    return 0


def _load_trial_file(path, grid):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read trial data file {path}: {exc}") from exc
    patients = []
    for n, rec in enumerate(obj.get("patients", [])):
        try:
            combo = DoseCombo(int(rec["i"]), int(rec["j"]))
            if not grid.contains(combo):
                raise ValidationError(
                    f"patients[{n}]: combo d{combo.i}{combo.j} outside the "
                    f"{grid.I}x{grid.J} grid"
                )
            patients.append(PatientRecord(
                combo=combo,
                entry_time=float(rec["entry_cycle"]),
                tox_time=None if rec.get("tox_time") is None else float(rec["tox_time"]),
                act_time=None if rec.get("act_time") is None else float(rec["act_time"]),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"patients[{n}] malformed in {path}: {exc}") from exc
    now = obj.get("clock_now")
    if now is None:
        entries = [p.entry_time for p in patients]
        now = (max(entries) + 1.0) if entries else 0.0
    return patients, float(now)


def _load_recommend_config(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        grid = DoseGrid(tuple(obj["grid"]["agent1_doses"]), tuple(obj["grid"]["agent2_doses"]))
        t = obj.get("targets", {})
        targets = TargetSpec(
            phi_t=t.get("phi_t", 0.3), phi_a=t.get("phi_a", 0.2),
            q_t=t.get("q_t", 0.2), q_a=t.get("q_a", 0.2), tau=t.get("tau", 3),
        )
        sampler = obj.get("sampler", {})
        cfg = TrialConfig(
            design=obj["design"],
            grid=grid,
            cohort_size=obj.get("cohort_size", 3),
            start=tuple(obj.get("start", (2, 2))),
            targets=targets,
            rules=RuleConfig(**obj.get("rules", {})),
            utility=UtilityWeights(penalty_form=obj.get("penalty_form", "fixed")),
            sampler=SamplerConfig(
                burn_in=sampler.get("burn_in", 2000),
                keep=sampler.get("keep", 4000),
                seed=sampler.get("seed", 0),
            ),
            pocrm_hyper=PocrmHyper(**obj.get("pocrm_hyper", {})),
            blrm_hyper=BlrmHyper(**obj.get("blrm_hyper", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed config {path}: {exc}") from exc
    return cfg


def cmd_recommend(args):
    cfg = _load_recommend_config(args.config)
    patients, now = _load_trial_file(args.data, cfg.grid)
    seed = _seed_from(args)
    rec = recommend_next(cfg, patients, now, seed=seed)
    report = {
        "provenance": _provenance(seed, {"command": "recommend", "design": cfg.design}),
        "action": rec.action,
        "combo": None if rec.combo is None else {"i": rec.combo[0], "j": rec.combo[1]},
        "stop_reason": rec.stop_reason,
        "admissible": [list(k) for k in rec.admissible],
        "excluded": [list(k) for k in rec.excluded],
        "posterior": rec.summaries,
    }
    print(json.dumps(report, indent=2))
    # human-readable table
    if rec.summaries:
        print("\ncombo  summary", file=sys.stderr)
        for key, s in sorted(rec.summaries.items()):
            print(f"  d{key.replace(',', '')}: {s}", file=sys.stderr)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return 0


def cmd_benchmark(args):
    scenario = _resolve_scenario(args.scenario)
    if args.replicates < 1:
        raise ValidationError("--replicates must be >= 1")
    seed = _seed_from(args)
    threads = args.threads or (os.cpu_count() or 1)
    results = run_benchmark(
        scenario, args.replicates, seed, n_max=args.n_max,
        convention=args.utility, threads=threads,
    )
    agg = aggregate_selections(results, scenario, convention=args.utility,
                               design_label="benchmark")
    os.makedirs(args.out, exist_ok=True)
    stem = f"benchmark_{scenario.name.replace('.', '_')}"
    _write_replicates_csv(os.path.join(args.out, f"{stem}_replicates.csv"), results)
    payload = {
        "provenance": _provenance(seed, {
            "command": "benchmark", "scenario": scenario.name,
            "replicates": args.replicates, "utility": args.utility, "n_max": args.n_max,
        }),
        "aggregate": agg,
    }
    with open(os.path.join(args.out, f"{stem}_aggregate.json"), "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(json.dumps(payload, indent=2))
    return 0


def cmd_calibrate(args):
    try:
        with open(args.grid_file) as fh:
            spec = json.load(fh)
        tox_grid = [tuple(c) for c in spec["tox_grid"]]
        act_grid = [tuple(c) for c in spec["act_grid"]]
        safety = [_resolve_scenario(s) for s in spec["safety_scenarios"]]
        joint = [_resolve_scenario(s) for s in spec["joint_scenarios"]]
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"malformed grid file {args.grid_file}: {exc}") from exc
    seed = _seed_from(args)
    cfg = _build_config(args)
    res = calibrate(
        cfg, safety, joint, tox_grid, act_grid,
        reps=args.replicates, seed=seed, epsilon=args.epsilon,
    )
    os.makedirs(args.out, exist_ok=True)
    trace_path = os.path.join(args.out, f"calibrate_{args.design}_trace.csv")
    with open(trace_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "endpoint", "c1", "c2", "v1", "v2", "scenario", "pcs", "gmean"])
        for row in res.trace:
            w.writerow([row.round, row.endpoint, *row.cell, row.scenario,
                        f"{row.pcs:.6f}", f"{row.gmean:.6f}"])
    chosen = {
        "provenance": _provenance(seed, {
            "command": "calibrate", "design": args.design,
            "grid_file": os.path.basename(args.grid_file),
            "replicates": args.replicates, "epsilon": args.epsilon,
        }),
        "tox": list(res.tox), "act": list(res.act),
        "gmean_pcs": res.gmean_pcs, "rounds": res.rounds,
    }
    with open(os.path.join(args.out, f"calibrate_{args.design}_chosen.json"), "w") as fh:
        json.dump(chosen, fh, indent=2)
        fh.write("\n")
    print(json.dumps(chosen, indent=2))
    return 0


def cmd_scenarios(args):
    if args.action == "list":
        for name in scenario_names():
            print(name)
        return 0
    scenario = _resolve_scenario(args.name)
    cls_m = scenario.classification("model")
    cls_b = scenario.classification("boin")
    util_b = utility_boin_true(scenario.p_act, scenario.p_tox, BoinUtilityTable())
    obj = scenario.to_jsonable()
    obj["utility_model"] = np.round(cls_m.utility, 4).tolist()
    obj["utility_boin"] = np.round(util_b, 4).tolist()
    obj["flags_boin"] = {
        "acceptable": cls_b.acceptable.tolist(),
        "good": cls_b.good.tolist(),
        "correct": list(cls_b.correct_combo()) if cls_b.correct_combo() else None,
    }
    print(json.dumps(obj, indent=2))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="combodose", description=__doc__)
    p.add_argument("--version", action="version", version=f"combodose {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, design=True):
        if design:
            sp.add_argument("--design", choices=("pocrm", "blrm", "boin12"), required=True)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--cohort-size", dest="cohort_size", type=int, default=3)
        sp.add_argument("--penalty-form", dest="penalty_form",
                        choices=("fixed", "scaled"), default="fixed")
        sp.add_argument("--dose-scaling", dest="dose_scaling",
                        choices=("max_normalized", "raw"), default="max_normalized")
        sp.add_argument("--burn-in", dest="burn_in", type=int, default=2000)
        sp.add_argument("--keep", type=int, default=4000)

    sp = sub.add_parser("simulate", help="run replicate simulations of one design")
    add_common(sp)
    sp.add_argument("--scenario", required=True, help="library name or scenario JSON path")
    sp.add_argument("--replicates", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("recommend", help="one dosing decision from a trial data file")
    sp.add_argument("--design", choices=("pocrm", "blrm", "boin12"))
    sp.add_argument("--config", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_recommend)

    sp = sub.add_parser("benchmark", help="admissibility-restricted optimal benchmark")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--replicates", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--n-max", dest="n_max", type=int, default=60)
    sp.add_argument("--utility", choices=("model", "boin"), default="model")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_benchmark)

    sp = sub.add_parser("calibrate", help="grid-search prior calibration")
    add_common(sp)
    sp.add_argument("--grid-file", dest="grid_file", required=True)
    sp.add_argument("--replicates", type=int, default=50)
    sp.add_argument("--epsilon", type=float, default=0.005)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_calibrate)

    sp = sub.add_parser("scenarios", help="list or show the scenario library")
    sp.add_argument("action", choices=("list", "show"))
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_scenarios)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scenarios" and args.action == "show" and not args.name:
        parser.error("scenarios show requires a name")
    if args.command == "recommend" and args.design is None:
        pass  # design comes from the config file
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
