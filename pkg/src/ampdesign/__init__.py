"""Measurement-ratio design for AMP under quadratically decreasing SNR."""

from .amp import AMPConfig, SigmaEstimator, amp_run, make_instance, monte_carlo, summarize
from .designer import (
    DesignResult,
    NoBracket,
    design_bg,
    design_gaussian,
    design_lf,
    region_sweep_bg,
)
from .priors import Domain, Prior, bernoulli_gaussian, gaussian, least_favorable, sample
from .risk import err_bg, err_lf, i_integral, i_integral_complex, optimal_alpha
from .state_evolution import Diverged, NoiseModel, se_fixed_point_mse, se_run

__version__ = "0.1.0"

__all__ = [
    "AMPConfig", "SigmaEstimator", "amp_run", "make_instance", "monte_carlo", "summarize",
    "DesignResult", "NoBracket", "design_bg", "design_gaussian", "design_lf", "region_sweep_bg",
    "Domain", "Prior", "bernoulli_gaussian", "gaussian", "least_favorable", "sample",
    "err_bg", "err_lf", "i_integral", "i_integral_complex", "optimal_alpha",
    "Diverged", "NoiseModel", "se_fixed_point_mse", "se_run",
]
