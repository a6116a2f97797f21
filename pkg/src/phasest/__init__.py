"""Adaptive Bayesian estimation of a phase from single-qubit measurements.

The density of the unknown phase lives in a truncated Fourier basis where
the Bayes update, the expected-gain formulas, and the phase estimate are all
closed forms.  Measurements are chosen shot by shot to maximize expected
gain per unit time, the representation window contracts as knowledge
sharpens, and a Monte Carlo harness measures how the estimation error falls
with the time budget."""

from ._backend import COMPILED, backend_name
from .density import FourierDensity, PhaseWindow
from .errors import (
    BudgetExhausted,
    DensityInvalid,
    EstimateUndefined,
    ImpossibleOutcome,
    OrderBudgetExceeded,
    PhasestError,
    UncertaintyUndefined,
)
from .gain import AlphaOptimum, best_ctrl, entropy_gain, expected_gain, sharpness_gain
from .harness import (
    BatchStats,
    FitResult,
    TrialResult,
    fit_exponential,
    fit_power,
    run_batch,
    run_shot_sweep,
    run_trial,
)
from .model import NoiseModel, outcome_prob, posterior_outcome_prob
from .policy import (
    ControlSettings,
    ResourceTable,
    SessionState,
    ShotPlan,
    StrategyConfig,
    apply_outcome,
    compare,
    contraction_sigma_threshold,
    fibonacci_search,
    gain_rate_select,
    intervals,
    multi_step_gain,
    multi_step_select,
    next_settings,
    search_interval,
    search_up,
    zoom_due,
)
from .simqubit import QubitState, Scenario, outcome_distribution, sample

__version__ = "0.1.0"

__all__ = [
    "AlphaOptimum",
    "BatchStats",
    "BudgetExhausted",
    "COMPILED",
    "ControlSettings",
    "DensityInvalid",
    "EstimateUndefined",
    "FitResult",
    "FourierDensity",
    "ImpossibleOutcome",
    "NoiseModel",
    "OrderBudgetExceeded",
    "PhaseWindow",
    "PhasestError",
    "QubitState",
    "ResourceTable",
    "Scenario",
    "SessionState",
    "ShotPlan",
    "StrategyConfig",
    "TrialResult",
    "UncertaintyUndefined",
    "apply_outcome",
    "backend_name",
    "best_ctrl",
    "compare",
    "contraction_sigma_threshold",
    "entropy_gain",
    "expected_gain",
    "fibonacci_search",
    "fit_exponential",
    "fit_power",
    "gain_rate_select",
    "intervals",
    "multi_step_gain",
    "multi_step_select",
    "next_settings",
    "outcome_distribution",
    "outcome_prob",
    "posterior_outcome_prob",
    "run_batch",
    "run_shot_sweep",
    "run_trial",
    "sample",
    "search_interval",
    "search_up",
    "sharpness_gain",
    "zoom_due",
]
