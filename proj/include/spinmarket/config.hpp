/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "spinmarket/lattice.hpp"
#include "spinmarket/stats.hpp"
#include "spinmarket/sweep.hpp"

namespace spinmarket {

struct StatsOptions {
    std::vector<int> taus = {1};
    std::vector<double> rq_list = {2.0, 5.0, 10.0, 30.0, 70.0};
    std::vector<double> q_list;  // absolute thresholds; overrides rq_list
    EventKind iet_kind = EventKind::loss;
    std::int64_t iet_stride = 1;  // subsample step before interevent analysis
    int max_lag = 1000;
    int bins = 101;
    double log_ratio = 1.25;
    int acf_fit_lo = 1;
    int acf_fit_hi = 1000;
    double tail_q_lo = 0.99;
    double tail_q_hi = 0.9999;
};

/// Flat `key = value` configuration with section-prefixed keys (`model.`,
/// `noise.`, `stats.`, `sweep.`). Unknown keys are rejected at parse time;
/// typed accessors validate on demand so a stats-only config does not need
/// model keys.
class Config {
public:
    static Config from_file(const std::filesystem::path& path);
    static Config from_string(const std::string& text,
                              const std::string& origin = "<config>");

    /// model.* and noise.* keys. Family-specific noise parameters must be
    /// present explicitly for the selected family.
    ModelParams model(std::optional<std::uint64_t> seed_override = {}) const;

    /// sweep.* keys.
    SweepGrid sweep_grid(std::optional<std::uint64_t> seed_override = {}) const;
    int sweep_workers() const;

    /// stats.* keys (all optional, with defaults).
    StatsOptions stats_options() const;

    bool has(const std::string& key) const { return values_.count(key) > 0; }

private:
    std::string origin_;
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    std::string require(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
    std::uint64_t uinteger_or(const std::string& key, std::uint64_t fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    AxisSpec axis(const std::string& key) const;
    NoiseSpec noise() const;
};

}  // namespace spinmarket
