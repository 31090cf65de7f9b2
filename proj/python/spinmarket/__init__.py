# SPDX-FileCopyrightText: 2026 spinmarket contributors
# SPDX-License-Identifier: MIT
"""Three-state spin-lattice market simulator with a statistics toolkit."""

from spinmarket._core import (  # noqa: F401
    GaussianContinuous,
    GaussianDiscrete,
    Histogram,
    IetSample,
    ModelParams,
    ParetoContinuous,
    ReturnSeries,
    TimeSeries,
    WmParams,
    agent_demand,
    autocorrelation,
    build_return_series,
    cumulative_abs_distribution,
    excess_demand,
    fit_iet,
    fit_truncated_powerlaw,
    iet_distribution,
    interevent_times,
    interevent_times_absolute,
    log_return,
    lower_incomplete_gamma,
    noise,
    psi_q,
    rescaled_histogram,
    return_series,
    run_sweep,
    sample_noise,
    simulate,
    subsample,
    tail_exponent,
    threshold_sign,
    upper_incomplete_gamma,
    wm_pmf,
    wm_tail_exponent,
    wm_variance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
