/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <filesystem>
#include <optional>

#include "spinmarket/config.hpp"

namespace spinmarket {

/// Shared invocation context: config path, output directory (created if
/// absent), optional seed override.
struct CommandContext {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
};

/// Writes magnetization.csv, returns_tau<k>.csv (plus *_excluded.csv when
/// exclusions happened) and run_manifest.txt.
void cmd_simulate(const CommandContext& ctx);

/// Reads a returns CSV and writes histogram.csv, abs_histogram.csv,
/// ccdf.csv, acf_raw.csv, acf_abs.csv, and fit_report.csv.
void cmd_stats(const CommandContext& ctx,
               const std::filesystem::path& returns_file);

/// Reads a returns CSV and writes per-threshold interevent histograms,
/// analytic overlays, and iet_report.csv.
void cmd_iet(const CommandContext& ctx,
             const std::filesystem::path& returns_file);

/// Runs the 4-D sweep with a resume manifest; writes sweep.csv and
/// per-(K,lambda) slice matrices.
void cmd_sweep(const CommandContext& ctx, bool fresh_start);

}  // namespace spinmarket
