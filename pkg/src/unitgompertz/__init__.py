"""Unit-Gompertz distribution: densities, truncated moments, L-moments, entropies."""

from .data import DataSample
from .dist import UnitGompertz
from .entropy import EntropyValue, mathai_haubold, tsallis
from .errors import (
    ArgumentError,
    ConvergenceError,
    DomainError,
    EstimationError,
    NumericalOverflowError,
    PrecisionError,
    UnitGompertzError,
)
from .lmom import LMomentSet, fit_by_lmoments, population_lmoments, pwm, sample_lmoments
from .oracle import OracleReport, VerifyConfig, integrate, mc_expectation, verify_all
from .special import upper_inc_gamma, upper_inc_gamma_scaled
from .trunc import (
    characterization_gof,
    g_factor,
    h_factor,
    hazard,
    reconstruct_density_from_g,
    reconstruct_density_from_h,
    reversed_hazard,
    truncated_mean_above,
    truncated_mean_below,
)

__all__ = [
    "UnitGompertz",
    "DataSample",
    "upper_inc_gamma",
    "upper_inc_gamma_scaled",
    "reversed_hazard",
    "hazard",
    "g_factor",
    "h_factor",
    "truncated_mean_below",
    "truncated_mean_above",
    "reconstruct_density_from_g",
    "reconstruct_density_from_h",
    "characterization_gof",
    "pwm",
    "population_lmoments",
    "sample_lmoments",
    "fit_by_lmoments",
    "LMomentSet",
    "tsallis",
    "mathai_haubold",
    "EntropyValue",
    "integrate",
    "mc_expectation",
    "verify_all",
    "VerifyConfig",
    "OracleReport",
    "UnitGompertzError",
    "DomainError",
    "ArgumentError",
    "ConvergenceError",
    "PrecisionError",
    "NumericalOverflowError",
    "EstimationError",
]
