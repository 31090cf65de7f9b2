/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cstdint>
#include <vector>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

/// Log returns at lag tau derived from a magnetization history.
///
/// A restart recorded at round u contaminates every value r_tau(t) with
/// u in (t - tau, t]; with exclusion on, those t are listed in `excluded`
/// instead of `t`/`r`.
struct ReturnSeries {
    int tau = 1;
    int N = 0;            // lattice site count, provenance
    double depth = 0.0;   // market depth used for the conversion
    std::vector<std::int64_t> t;
    std::vector<double> r;
    std::vector<std::int64_t> excluded;

    std::size_t size() const { return r.size(); }
};

/// D_tau(t) = N * [M(t) - M(t - tau)].
double excess_demand(const TimeSeries& ts, std::int64_t t, int tau);

/// r_tau(t) = D_tau(t) / depth.
double log_return(const TimeSeries& ts, std::int64_t t, int tau, double depth);

/// r_tau(t) for every t in (tau, T], dropping restart-window values when
/// include_restart_return is false.
ReturnSeries build_return_series(const TimeSeries& ts, int tau,
                                 bool include_restart_return);

/// Policy taken from ts.params.restart.
ReturnSeries build_return_series(const TimeSeries& ts, int tau);

/// curr - prev; the agent's traded quantity between two rounds.
int agent_demand(int prev, int curr);

/// Keeps only entries with t divisible by `stride` and relabels times in
/// stride units, turning an overlapping lag-tau series into non-overlapping
/// observations (stride = tau gives one return per tau-round block, the
/// usual daily-return convention). Grid points missing due to exclusion
/// become the excluded times of the subsampled series.
ReturnSeries subsample(const ReturnSeries& rs, std::int64_t stride);

/// Log price levels from cumulative unit-lag returns, ln P(0) = 0.
/// Plotting aid only; returns are the primary object.
std::vector<double> log_price_path(const ReturnSeries& unit_lag_returns);

}  // namespace spinmarket
