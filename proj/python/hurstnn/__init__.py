"""DFA Hurst exponents and nearest-neighbour direction forecasts."""

from ._core import (
    ConfigError,
    Error,
    FitError,
    HurstFit,
    InputError,
    InsufficientHistory,
    ParameterError,
    analyze,
    estimate_hurst,
    fgn,
    fluctuation,
    log_returns,
    pearson,
    predict_window,
    random_walk,
    spearman,
)

__all__ = [
    "ConfigError",
    "Error",
    "FitError",
    "HurstFit",
    "InputError",
    "InsufficientHistory",
    "ParameterError",
    "analyze",
    "estimate_hurst",
    "fgn",
    "fluctuation",
    "log_returns",
    "pearson",
    "predict_window",
    "random_walk",
    "spearman",
]
