"""Weibull tail-coefficient estimation, adaptive choice of k and extreme quantiles."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .distributions import (
    AbsNormal,
    DistributionSpec,
    Gamma,
    HallD,
    SeededStream,
    Weibull,
    hall_h_inverse,
    parse_spec,
    sample,
    true_bias,
)
from .estimators import (
    EstimatorCurves,
    LogSpacings,
    Method,
    Sample,
    SelectionResult,
    TailFit,
    amse_hat,
    amse_true,
    design_points,
    estimator_curves,
    log_spacings,
    ls_fit,
    select_k,
    theta_check,
    theta_tilde,
)
from .quantiles import QuantileRequest, quantile_bias_reduced, quantile_weissman, return_level
from .simulation import SimulationConfig, k_opt, run_adaptive_study, run_curves, run_study
