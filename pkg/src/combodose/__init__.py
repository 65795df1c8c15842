"""combodose: dual-agent phase I/II dose-finding with late-onset toxicity
and activity — three adaptive designs, a trial simulator, benchmark and
prior-calibration tooling.
"""

__version__ = "0.1.0"

from .grid import DoseCombo, DoseGrid, PatientRecord, TargetSpec, compute_weights
from .utility import (
    BoinUtilityTable,
    UtilityWeights,
    classify_doses,
    utility_boin_true,
    utility_model_based,
)
from .scenarios import ScenarioSpec, get_scenario, scenario_names
from .engine import (
    TrialConfig,
    TrialResult,
    aggregate_results,
    recommend_next,
    run_trial,
    simulate_many,
)

__all__ = [
    "DoseCombo",
    "DoseGrid",
    "PatientRecord",
    "TargetSpec",
    "compute_weights",
    "UtilityWeights",
    "BoinUtilityTable",
    "utility_model_based",
    "utility_boin_true",
    "classify_doses",
    "ScenarioSpec",
    "get_scenario",
    "scenario_names",
    "TrialConfig",
    "TrialResult",
    "run_trial",
    "recommend_next",
    "simulate_many",
    "aggregate_results",
    "__version__",
]
