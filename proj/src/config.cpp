/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinmarket {

namespace {

constexpr std::array kKnownKeys = {
    "model.J", "model.lambda", "model.n", "model.T", "model.seed",
    "model.market_depth", "model.restart_enabled",
    "model.include_restart_return", "model.threshold_magnetization",
    "noise.family", "noise.K", "noise.b", "noise.b0", "noise.sigma",
    "noise.step", "noise.exponent", "noise.scale",
    "stats.tau", "stats.rq", "stats.q", "stats.iet_kind", "stats.iet_stride",
    "stats.max_lag",
    "stats.bins", "stats.log_ratio", "stats.acf_fit_lo", "stats.acf_fit_hi",
    "stats.tail_q_lo", "stats.tail_q_hi",
    "sweep.lambda", "sweep.K", "sweep.b", "sweep.b0", "sweep.T",
    "sweep.restart_enabled",
    "sweep.replicas", "sweep.base_seed", "sweep.n", "sweep.workers",
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool known_key(const std::string& key) {
    return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) !=
           kKnownKeys.end();
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str(), path.string());
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config config;
    config.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key))
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        if (value.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": empty value for '" + key + "'");
        if (config.values_.count(key))
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": duplicate key '" + key + "'");
        config.values_[key] = value;
        config.lines_[key] = line_no;
    }
    return config;
}

void Config::fail(const std::string& key, const std::string& what) const {
    std::string where = origin_;
    const auto it = lines_.find(key);
    if (it != lines_.end()) where += ":" + std::to_string(it->second);
    throw std::invalid_argument(where + ": key '" + key + "': " + what);
}

std::string Config::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(key, "required but missing");
    return it->second;
}

std::string Config::get_or(const std::string& key,
                           const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::number(const std::string& key) const {
    const std::string text = require(key);
    try {
        return parse_number(text);
    } catch (const std::exception&) {
        fail(key, "not a number: '" + text + "'");
    }
}

double Config::number_or(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return number(key);
}

std::int64_t Config::integer_or(const std::string& key,
                                std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string text = require(key);
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail(key, "not an integer: '" + text + "'");
    }
}

std::uint64_t Config::uinteger_or(const std::string& key,
                                  std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string text = require(key);
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size() || text.front() == '-')
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail(key, "not an unsigned integer: '" + text + "'");
    }
}

bool Config::flag_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string text = require(key);
    if (text == "true") return true;
    if (text == "false") return false;
    fail(key, "expected true or false, got '" + text + "'");
}

AxisSpec Config::axis(const std::string& key) const {
    const std::string text = require(key);
    AxisSpec spec;
    const auto c1 = text.find(':');
    const auto c2 = text.rfind(':');
    if (c1 == std::string::npos || c2 == c1) {
        // A single value is a one-point axis.
        try {
            spec.start = spec.stop = parse_number(text);
            spec.step = 1.0;
            return spec;
        } catch (const std::exception&) {
            fail(key, "expected 'start:step:stop' or a single number");
        }
    }
    try {
        spec.start = parse_number(trim(text.substr(0, c1)));
        spec.step = parse_number(trim(text.substr(c1 + 1, c2 - c1 - 1)));
        spec.stop = parse_number(trim(text.substr(c2 + 1)));
    } catch (const std::exception&) {
        fail(key, "expected 'start:step:stop', got '" + text + "'");
    }
    return spec;
}

NoiseSpec Config::noise() const {
    const std::string family = get_or("noise.family", "wm");
    // Family parameters are deliberately required rather than defaulted:
    // every run declares the noise it used.
    if (family == "wm")
        return WmParams{number("noise.K"), number("noise.b"),
                        number("noise.b0")};
    if (family == "gauss") return GaussianContinuous{number("noise.sigma")};
    if (family == "dgauss")
        return GaussianDiscrete{number("noise.sigma"), number("noise.step")};
    if (family == "pareto")
        return ParetoContinuous{number("noise.exponent"),
                                number("noise.scale")};
    fail("noise.family",
         "expected wm, gauss, dgauss, or pareto, got '" + family + "'");
}

ModelParams Config::model(std::optional<std::uint64_t> seed_override) const {
    ModelParams params;
    params.J = number_or("model.J", 1.0);
    params.lambda = number("model.lambda");
    params.n = static_cast<int>(integer_or("model.n", 32));
    params.T = integer_or("model.T", 10000);
    params.seed = seed_override ? *seed_override : uinteger_or("model.seed", 1);
    params.market_depth = number_or("model.market_depth", 0.0);
    params.restart.enabled = flag_or("model.restart_enabled", true);
    params.restart.include_restart_return =
        flag_or("model.include_restart_return", false);
    const std::string mode =
        get_or("model.threshold_magnetization", "running");
    if (mode == "running") {
        params.threshold_mag = ThresholdMag::running;
    } else if (mode == "previous_round") {
        params.threshold_mag = ThresholdMag::previous_round;
    } else {
        fail("model.threshold_magnetization",
             "expected running or previous_round, got '" + mode + "'");
    }
    params.noise = noise();
    params.validate();
    return params;
}

SweepGrid Config::sweep_grid(std::optional<std::uint64_t> seed_override) const {
    SweepGrid grid;
    grid.lambda_axis = axis("sweep.lambda");
    grid.K_axis = axis("sweep.K");
    grid.b_axis = axis("sweep.b");
    grid.b0_axis = axis("sweep.b0");
    grid.T = integer_or("sweep.T", 10000);
    grid.replicas = static_cast<int>(integer_or("sweep.replicas", 1));
    grid.base_seed =
        seed_override ? *seed_override : uinteger_or("sweep.base_seed", 1);
    grid.n = static_cast<int>(integer_or("sweep.n", 32));
    grid.restart_enabled = flag_or("sweep.restart_enabled", false);
    grid.validate();
    return grid;
}

int Config::sweep_workers() const {
    return static_cast<int>(integer_or("sweep.workers", 0));
}

StatsOptions Config::stats_options() const {
    StatsOptions opts;
    if (has("stats.tau")) {
        opts.taus.clear();
        for (const auto& item : split_list(require("stats.tau"))) {
            try {
                opts.taus.push_back(static_cast<int>(std::stoi(item)));
            } catch (const std::exception&) {
                fail("stats.tau", "not an integer: '" + item + "'");
            }
        }
        if (opts.taus.empty()) fail("stats.tau", "empty list");
    }
    if (has("stats.rq")) {
        opts.rq_list.clear();
        for (const auto& item : split_list(require("stats.rq"))) {
            try {
                opts.rq_list.push_back(parse_number(item));
            } catch (const std::exception&) {
                fail("stats.rq", "not a number: '" + item + "'");
            }
        }
    }
    if (has("stats.q")) {
        for (const auto& item : split_list(require("stats.q"))) {
            try {
                opts.q_list.push_back(parse_number(item));
            } catch (const std::exception&) {
                fail("stats.q", "not a number: '" + item + "'");
            }
        }
    }
    const std::string kind = get_or("stats.iet_kind", "loss");
    if (kind == "loss") {
        opts.iet_kind = EventKind::loss;
    } else if (kind == "profit") {
        opts.iet_kind = EventKind::profit;
    } else {
        fail("stats.iet_kind", "expected loss or profit, got '" + kind + "'");
    }
    opts.iet_stride = integer_or("stats.iet_stride", 1);
    if (opts.iet_stride < 1) fail("stats.iet_stride", "must be >= 1");
    opts.max_lag = static_cast<int>(integer_or("stats.max_lag", 1000));
    opts.bins = static_cast<int>(integer_or("stats.bins", 101));
    opts.log_ratio = number_or("stats.log_ratio", 1.25);
    opts.acf_fit_lo = static_cast<int>(integer_or("stats.acf_fit_lo", 1));
    opts.acf_fit_hi = static_cast<int>(integer_or("stats.acf_fit_hi", 1000));
    opts.tail_q_lo = number_or("stats.tail_q_lo", 0.99);
    opts.tail_q_hi = number_or("stats.tail_q_hi", 0.9999);
    return opts;
}

}  // namespace spinmarket
