"""Simulation study: models, error estimation, tuning and benchmark suites."""
from .evaluate import ExperimentReport, MseResult, ReportRow, mse_on_test, run_monte_carlo
from .hd import hd_augment
from .models import MODELS, SimData, SimulationModel, data_rng, generate, get_model
from .suites import opt_config
from .tuning import TuningSpace, cv_tune, nested_cv, opt_tune

__all__ = [
    "ExperimentReport", "MseResult", "ReportRow", "mse_on_test", "run_monte_carlo", "hd_augment", "MODELS",
    "SimData", "SimulationModel", "data_rng", "generate", "get_model", "opt_config", "TuningSpace", "cv_tune",
    "nested_cv", "opt_tune",
]
