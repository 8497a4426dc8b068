"""Regression forests with random, interaction and two-step splits.

Four growers share one data layout and split search: Random Forest
(``rf``), Extremely Randomized Trees (``et``), Interaction Forests
(``intf``) and Random Split Random Forests (``rsrf``).
"""
from .baselines import MeanY, OneNN, fit_baseline, predict_baseline
from .config import EtConfig, IntfConfig, RfConfig, RsrfConfig, build_config
from .core import Axis, ConfigError, Dataset, Forest, IntfBivariate, Tree, partition_indices, predict_forest, predict_tree
from .ensemble import ResamplePlan, draw_resample, fit_forest, load_forest, save_forest
from .rng import RngStream

__all__ = [
    "MeanY", "OneNN", "fit_baseline", "predict_baseline", "EtConfig", "IntfConfig", "RfConfig", "RsrfConfig",
    "build_config", "Axis", "ConfigError", "Dataset", "Forest", "IntfBivariate", "Tree", "partition_indices",
    "predict_forest", "predict_tree", "ResamplePlan", "draw_resample", "fit_forest", "load_forest", "save_forest",
    "RngStream",
]
