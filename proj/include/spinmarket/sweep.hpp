/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

/// Inclusive arithmetic axis start, start+step, ... up to stop (with a small
/// tolerance so e.g. 0.1:0.2:3.9 lands exactly on 3.9).
struct AxisSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    int count() const;
    double at(int i) const { return start + step * i; }
    void validate() const;
};

/// 4-D sweep over (lambda, K, b, b0) of the heavy-tailed noise model with
/// J fixed at 1. Flat point index runs b0 fastest, then b, K, lambda.
struct SweepGrid {
    AxisSpec lambda_axis;
    AxisSpec K_axis;
    AxisSpec b_axis;
    AxisSpec b0_axis;
    std::int64_t T = 10000;
    int replicas = 1;
    std::uint64_t base_seed = 1;
    int n = 32;
    // Phase-diagram sweeps characterize the bare spin dynamics; the
    // market-maker restart would re-randomize every fully ordered point,
    // hiding the ordered regimes, so it defaults to off here.
    bool restart_enabled = false;

    void validate() const;
    std::int64_t points() const;
    std::int64_t tasks() const { return points() * replicas; }

    /// Grid coordinates of a flat point index.
    void coords(std::int64_t point, int& il, int& ik, int& ib, int& ib0) const;
    ModelParams params_at(std::int64_t point, int replica) const;
};

struct SweepRecord {
    double lambda = 0.0, K = 0.0, b = 0.0, b0 = 0.0;
    int replica = 0;
    std::uint64_t seed = 0;
    double m_final = 0.0;
    std::int64_t restarts = 0;
    double wall_ms = 0.0;
    std::int64_t point = 0;  // flat grid index, for manifests
};

using SweepSink = std::function<void(const SweepRecord&)>;

/// Runs one simulation per grid point and replica on `worker_budget` threads.
/// Records reach the sink in task order (point-major, replica-minor) no
/// matter how workers are scheduled, so output files are reproducible.
/// Tasks present in `skip` are not run (used to resume an interrupted sweep).
void run_sweep(const SweepGrid& grid, int worker_budget, const SweepSink& sink,
               const std::set<std::pair<std::int64_t, int>>* skip = nullptr);

/// Mean |M_T| over replicas arranged as matrix[b0 index][b index] for the
/// grid slice at fixed (K, lambda). Missing grid points stay NaN.
struct SliceMatrix {
    std::vector<double> b_values;
    std::vector<double> b0_values;
    std::vector<std::vector<double>> mean_abs_m;  // [b0][b]
    std::int64_t missing = 0;
};

SliceMatrix slice(std::span<const SweepRecord> records, const SweepGrid& grid,
                  double K, double lambda);

}  // namespace spinmarket
