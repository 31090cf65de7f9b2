/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/market.hpp"

#include <cmath>
#include <stdexcept>

namespace spinmarket {

namespace {

double magnetization_at(const TimeSeries& ts, std::int64_t t) {
    if (t < 1 || t > static_cast<std::int64_t>(ts.rounds.size()))
        throw std::out_of_range("market: round index out of range");
    return ts.rounds[static_cast<std::size_t>(t - 1)].m;
}

}  // namespace

double excess_demand(const TimeSeries& ts, std::int64_t t, int tau) {
    if (tau < 1) throw std::invalid_argument("market: tau must be >= 1");
    if (t <= tau) throw std::out_of_range("market: need t > tau");
    const double dm = magnetization_at(ts, t) - magnetization_at(ts, t - tau);
    return static_cast<double>(ts.params.N()) * dm;
}

double log_return(const TimeSeries& ts, std::int64_t t, int tau, double depth) {
    if (!(depth > 0.0)) throw std::invalid_argument("market: depth must be > 0");
    return excess_demand(ts, t, tau) / depth;
}

ReturnSeries build_return_series(const TimeSeries& ts, int tau,
                                 bool include_restart_return) {
    if (tau < 1) throw std::invalid_argument("market: tau must be >= 1");
    const auto T = static_cast<std::int64_t>(ts.rounds.size());
    if (tau >= T)
        throw std::invalid_argument("market: tau must be smaller than the horizon");

    ReturnSeries rs;
    rs.tau = tau;
    rs.N = ts.params.N();
    rs.depth = ts.params.depth();
    rs.t.reserve(static_cast<std::size_t>(T - tau));
    rs.r.reserve(static_cast<std::size_t>(T - tau));

    // Prefix restart counts; window (t - tau, t] holds a restart exactly when
    // the count increases across it.
    std::vector<std::int64_t> restarts_upto(static_cast<std::size_t>(T) + 1, 0);
    for (std::int64_t u = 1; u <= T; ++u)
        restarts_upto[static_cast<std::size_t>(u)] =
            restarts_upto[static_cast<std::size_t>(u - 1)] +
            (ts.rounds[static_cast<std::size_t>(u - 1)].restarted ? 1 : 0);

    const double scale = static_cast<double>(rs.N) / rs.depth;
    for (std::int64_t t = tau + 1; t <= T; ++t) {
        if (!include_restart_return &&
            restarts_upto[static_cast<std::size_t>(t)] >
                restarts_upto[static_cast<std::size_t>(t - tau)]) {
            rs.excluded.push_back(t);
            continue;
        }
        const double dm = ts.rounds[static_cast<std::size_t>(t - 1)].m -
                          ts.rounds[static_cast<std::size_t>(t - tau - 1)].m;
        rs.t.push_back(t);
        rs.r.push_back(scale * dm);
    }
    return rs;
}

ReturnSeries build_return_series(const TimeSeries& ts, int tau) {
    return build_return_series(ts, tau,
                               ts.params.restart.include_restart_return);
}

int agent_demand(int prev, int curr) {
    if (prev < -1 || prev > 1 || curr < -1 || curr > 1)
        throw std::invalid_argument("market: spins must be in {-1, 0, +1}");
    return curr - prev;
}

ReturnSeries subsample(const ReturnSeries& rs, std::int64_t stride) {
    if (stride < 1) throw std::invalid_argument("market: stride must be >= 1");
    if (stride == 1) return rs;
    ReturnSeries out;
    out.tau = rs.tau;
    out.N = rs.N;
    out.depth = rs.depth;
    for (std::size_t i = 0; i < rs.t.size(); ++i) {
        if (rs.t[i] % stride != 0) continue;
        out.t.push_back(rs.t[i] / stride);
        out.r.push_back(rs.r[i]);
    }
    // Grid points missing because of exclusion are the gaps of the
    // subsampled series.
    for (const auto e : rs.excluded)
        if (e % stride == 0) out.excluded.push_back(e / stride);
    return out;
}

std::vector<double> log_price_path(const ReturnSeries& unit_lag_returns) {
    std::vector<double> log_price;
    log_price.reserve(unit_lag_returns.r.size() + 1);
    double level = 0.0;
    log_price.push_back(level);
    for (const double r : unit_lag_returns.r) {
        level += r;
        log_price.push_back(level);
    }
    return log_price;
}

}  // namespace spinmarket
