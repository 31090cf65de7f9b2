/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "spinmarket/analytic.hpp"
#include "spinmarket/csv.hpp"

namespace spinmarket {

namespace fs = std::filesystem;

namespace {

std::string axis_text(const AxisSpec& axis) {
    return format_compact(axis.start) + ":" + format_compact(axis.step) + ":" +
           format_compact(axis.stop);
}

std::string noise_text(const NoiseSpec& spec) {
    if (const auto* wm = std::get_if<WmParams>(&spec))
        return "wm K=" + format_compact(wm->K) + " b=" + format_compact(wm->b) +
               " b0=" + format_compact(wm->b0);
    if (const auto* g = std::get_if<GaussianContinuous>(&spec))
        return "gauss sigma=" + format_compact(g->sigma);
    if (const auto* dg = std::get_if<GaussianDiscrete>(&spec))
        return "dgauss sigma=" + format_compact(dg->sigma) +
               " step=" + format_compact(dg->step);
    const auto& p = std::get<ParetoContinuous>(spec);
    return "pareto exponent=" + format_compact(p.exponent) +
           " scale=" + format_compact(p.scale);
}

void ensure_out_dir(const CommandContext& ctx) {
    if (!ctx.out_dir.empty()) fs::create_directories(ctx.out_dir);
}

void write_histogram_csv(const fs::path& path, const Histogram& hist,
                         const char* header = "x,density") {
    CsvFile out(path);
    out.line(header);
    for (int i = 0; i < hist.bins(); ++i)
        out.line(format_double(hist.center(i)) + "," +
                 format_double(hist.density(i)));
    out.close();
}

void write_acf_csv(const fs::path& path, const AcfCurve& acf) {
    CsvFile out(path);
    out.line("lag,c");
    for (int lag = 0; lag <= acf.max_lag(); ++lag)
        out.line(std::to_string(lag) + "," +
                 format_double(acf.c[static_cast<std::size_t>(lag)]));
    out.close();
}

}  // namespace

void cmd_simulate(const CommandContext& ctx) {
    const Config config = Config::from_file(ctx.config_path);
    const ModelParams params = config.model(ctx.seed);
    const StatsOptions stats = config.stats_options();
    ensure_out_dir(ctx);

    const TimeSeries ts = simulate(params);

    {
        CsvFile out(ctx.out_dir / "magnetization.csv");
        out.line("t,m,restarted");
        for (const auto& rec : ts.rounds)
            out.raw("%" PRId64 ",%.17g,%d\n", rec.t, rec.m,
                    rec.restarted ? 1 : 0);
        out.close();
    }

    for (const int tau : stats.taus) {
        if (tau < 1 || tau >= params.T) continue;  // noted in the manifest
        const ReturnSeries rs = build_return_series(ts, tau);
        CsvFile out(ctx.out_dir / ("returns_tau" + std::to_string(tau) + ".csv"));
        out.line("t,r");
        for (std::size_t i = 0; i < rs.r.size(); ++i)
            out.raw("%" PRId64 ",%.17g\n", rs.t[i], rs.r[i]);
        out.close();
        if (!rs.excluded.empty()) {
            CsvFile side(ctx.out_dir /
                         ("returns_tau" + std::to_string(tau) + "_excluded.csv"));
            side.line("t");
            for (const auto t : rs.excluded) side.raw("%" PRId64 "\n", t);
            side.close();
        }
    }

    CsvFile manifest(ctx.out_dir / "run_manifest.txt");
    manifest.line("command = simulate");
    manifest.line("seed = " + std::to_string(params.seed));
    manifest.line("n = " + std::to_string(params.n));
    manifest.line("T = " + std::to_string(params.T));
    manifest.line("J = " + format_compact(params.J));
    manifest.line("lambda = " + format_compact(params.lambda));
    manifest.line("market_depth = " + format_compact(params.depth()));
    manifest.line("noise = " + noise_text(params.noise));
    manifest.line(std::string("restart_enabled = ") +
                  (params.restart.enabled ? "true" : "false"));
    manifest.line(std::string("include_restart_return = ") +
                  (params.restart.include_restart_return ? "true" : "false"));
    manifest.line(std::string("threshold_magnetization = ") +
                  (params.threshold_mag == ThresholdMag::running
                       ? "running"
                       : "previous_round"));
    manifest.line("m0 = " + format_double(ts.m0));
    manifest.line("restarts = " + std::to_string(ts.restart_count()));
    for (const int tau : stats.taus) {
        if (tau < 1 || tau >= params.T)
            manifest.line("skipped_tau = " + std::to_string(tau) +
                          " (needs 1 <= tau < T)");
    }
    manifest.close();
}

void cmd_stats(const CommandContext& ctx, const fs::path& returns_file) {
    const Config config = Config::from_file(ctx.config_path);
    const StatsOptions opts = config.stats_options();
    ensure_out_dir(ctx);

    const ReturnSeries rs = load_series_csv(returns_file);
    if (rs.r.empty())
        throw std::runtime_error(returns_file.string() + ": empty return series");
    const double sigma = stddev_of(rs.r);

    write_histogram_csv(ctx.out_dir / "histogram.csv",
                        rescaled_histogram(rs, opts.bins));

    // Log-binned |r|/sigma density; the natural object for tail fits.
    std::vector<double> abs_scaled;
    abs_scaled.reserve(rs.r.size());
    for (const double r : rs.r)
        if (r != 0.0) abs_scaled.push_back(std::abs(r) / sigma);
    Histogram abs_hist;
    if (abs_scaled.size() >= 2) {
        const auto [lo, hi] =
            std::minmax_element(abs_scaled.begin(), abs_scaled.end());
        double hi_edge = *hi * (1.0 + 1e-12);
        if (!(hi_edge > *lo)) hi_edge = *lo * opts.log_ratio;
        abs_hist = make_histogram(
            abs_scaled, BinSpec::logarithmic(*lo, hi_edge, opts.log_ratio));
        write_histogram_csv(ctx.out_dir / "abs_histogram.csv", abs_hist);
    }

    {
        const CcdfCurve curve = cumulative_abs_distribution(rs);
        CsvFile out(ctx.out_dir / "ccdf.csv");
        out.line("x,ccdf");
        for (std::size_t i = 0; i < curve.x.size(); ++i)
            out.line(format_double(curve.x[i]) + "," + format_double(curve.p[i]));
        out.close();
    }

    const int max_lag =
        std::min<int>(opts.max_lag, static_cast<int>(rs.r.size()) - 1);
    const AcfCurve acf_raw = autocorrelation(rs.r, max_lag);
    write_acf_csv(ctx.out_dir / "acf_raw.csv", acf_raw);

    std::vector<double> abs_r;
    abs_r.reserve(rs.r.size());
    for (const double r : rs.r) abs_r.push_back(std::abs(r));
    const AcfCurve acf_abs = autocorrelation(abs_r, max_lag);
    write_acf_csv(ctx.out_dir / "acf_abs.csv", acf_abs);

    CsvFile report(ctx.out_dir / "fit_report.csv");
    report.line("key,value");
    report.line("count," + std::to_string(rs.r.size()));
    report.line("mean," + format_double(mean_of(rs.r)));
    report.line("sigma," + format_double(sigma));
    report.line("acf_raw_lag1," + format_double(acf_raw.c[1]));
    report.line("white_noise_band," +
                format_double(3.0 / std::sqrt(static_cast<double>(rs.r.size()))));
    try {
        const TruncPowerLawFit fit =
            fit_truncated_powerlaw(acf_abs, opts.acf_fit_lo, opts.acf_fit_hi);
        report.line("acf_abs_fit_amplitude," + format_double(fit.amplitude));
        report.line("acf_abs_fit_exponent," + format_double(fit.exponent));
        report.line("acf_abs_fit_cutoff," + format_double(fit.cutoff));
        report.line("acf_abs_fit_residual_rms," + format_double(fit.residual_rms));
        report.line("acf_abs_fit_window," + std::to_string(fit.lag_lo) + ";" +
                    std::to_string(fit.lag_hi));
        const ExponentialFit exp_fit =
            fit_exponential(acf_abs, opts.acf_fit_lo, opts.acf_fit_hi);
        report.line("acf_abs_exp_cutoff," + format_double(exp_fit.cutoff));
        report.line("acf_abs_exp_residual_rms," +
                    format_double(exp_fit.residual_rms));
    } catch (const std::exception& err) {
        report.line(std::string("acf_abs_fit_error,\"") + err.what() + "\"");
    }
    if (abs_hist.total > 0) {
        try {
            const TailFit tail =
                tail_exponent(abs_hist, opts.tail_q_lo, opts.tail_q_hi);
            report.line("density_tail_exponent," + format_double(tail.exponent));
            report.line("density_tail_stderr," + format_double(tail.std_error));
            report.line("density_tail_drift," + format_double(tail.drift));
            report.line(std::string("density_tail_power_law,") +
                        (tail.power_law ? "true" : "false"));
        } catch (const std::exception& err) {
            report.line(std::string("density_tail_error,\"") + err.what() + "\"");
        }
        try {
            const TailFit tail = tail_exponent(cumulative_abs_distribution(rs),
                                               opts.tail_q_lo, opts.tail_q_hi);
            report.line("ccdf_tail_exponent," + format_double(tail.exponent));
            report.line("ccdf_tail_stderr," + format_double(tail.std_error));
        } catch (const std::exception& err) {
            report.line(std::string("ccdf_tail_error,\"") + err.what() + "\"");
        }
    }
    report.close();
}

void cmd_iet(const CommandContext& ctx, const fs::path& returns_file) {
    const Config config = Config::from_file(ctx.config_path);
    const StatsOptions opts = config.stats_options();
    ensure_out_dir(ctx);

    ReturnSeries rs = load_series_csv(returns_file);
    if (opts.iet_stride > 1) rs = subsample(rs, opts.iet_stride);

    CsvFile report(ctx.out_dir / "iet_report.csv");
    report.line(
        "label,threshold,events,intervals,flag,branch,alpha,tau_q,residual,"
        "converged");

    const bool absolute = !opts.q_list.empty();
    const auto& thresholds = absolute ? opts.q_list : opts.rq_list;
    for (const double value : thresholds) {
        const IetSample sample =
            absolute ? interevent_times_absolute(rs, value, opts.iet_kind)
                     : interevent_times(rs, value, opts.iet_kind);
        const std::string label =
            (absolute ? "q" : "rq") + format_compact(value);
        std::string row = label + "," + format_double(sample.threshold) + "," +
                          std::to_string(sample.events) + "," +
                          std::to_string(sample.intervals.size()) + ",";
        if (sample.intervals.size() >= 2) {
            const Histogram hist = iet_distribution(sample, opts.log_ratio);
            write_histogram_csv(ctx.out_dir / ("iet_" + label + ".csv"), hist,
                                "dt,density");
            if (sample.intervals.size() >= 20) {
                const IetFit fit = fit_iet(sample, opts.log_ratio);
                // Overlay sampled on a dense log grid across the data range.
                CsvFile overlay(ctx.out_dir / ("psi_" + label + ".csv"));
                overlay.line("dt,psi");
                const double lo = hist.edges.front();
                const double hi = hist.edges.back();
                const int steps = 200;
                for (int i = 0; i <= steps; ++i) {
                    const double dt =
                        lo * std::pow(hi / lo, static_cast<double>(i) / steps);
                    overlay.line(format_double(dt) + "," +
                                 format_double(psi_q(fit.model, dt)));
                }
                overlay.close();
                row += "ok," +
                       std::string(fit.model.branch == IetBranch::plus ? "plus"
                                                                       : "minus") +
                       "," + format_double(fit.model.alpha) + "," +
                       format_double(fit.model.tau_q) + "," +
                       format_double(fit.residual) + "," +
                       (fit.converged ? "true" : "false");
            } else {
                row += "too_few_events_for_fit,,,,,";
            }
        } else {
            row += "too_few_events,,,,,";
        }
        report.line(row);
    }
    report.close();
}

namespace {

constexpr const char* kManifestFormat = "spinmarket-sweep-v1";

std::vector<std::string> manifest_spec_lines(const SweepGrid& grid) {
    return {
        std::string("format = ") + kManifestFormat,
        "lambda = " + axis_text(grid.lambda_axis),
        "K = " + axis_text(grid.K_axis),
        "b = " + axis_text(grid.b_axis),
        "b0 = " + axis_text(grid.b0_axis),
        "T = " + std::to_string(grid.T),
        "replicas = " + std::to_string(grid.replicas),
        "base_seed = " + std::to_string(grid.base_seed),
        "n = " + std::to_string(grid.n),
        std::string("restart_enabled = ") + (grid.restart_enabled ? "true" : "false"),
    };
}

// Completed (point, replica) pairs from an existing manifest; throws if the
// manifest is unreadable or belongs to a different grid.
std::set<std::pair<std::int64_t, int>> read_manifest(const fs::path& path,
                                                     const SweepGrid& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    const auto expected = manifest_spec_lines(grid);
    std::set<std::pair<std::int64_t, int>> done;
    std::string line;
    std::size_t line_no = 0;
    std::size_t spec_idx = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("done = ", 0) == 0) {
            std::int64_t point = 0;
            int replica = 0;
            if (std::sscanf(line.c_str(), "done = %" SCNd64 ",%d", &point,
                            &replica) != 2)
                throw std::runtime_error(path.string() + ":" +
                                         std::to_string(line_no) +
                                         ": corrupt manifest; rerun with --fresh");
            if (point < 0 || point >= grid.points() || replica < 0 ||
                replica >= grid.replicas)
                throw std::runtime_error(path.string() + ":" +
                                         std::to_string(line_no) +
                                         ": completion entry outside the grid; "
                                         "rerun with --fresh");
            done.emplace(point, replica);
            continue;
        }
        if (spec_idx >= expected.size() || line != expected[spec_idx])
            throw std::runtime_error(
                path.string() + ":" + std::to_string(line_no) +
                ": manifest does not match the configured grid; rerun with "
                "--fresh to discard it");
        ++spec_idx;
    }
    if (spec_idx != expected.size())
        throw std::runtime_error(path.string() +
                                 ": truncated manifest; rerun with --fresh");
    return done;
}

std::vector<SweepRecord> read_sweep_csv(const fs::path& path,
                                        const SweepGrid& grid) {
    const CsvTable table = read_numeric_csv(path);
    const std::vector<std::string> expected = {
        "lambda", "K", "b", "b0", "replica", "seed", "m_final", "restarts",
        "wall_ms"};
    if (table.header != expected)
        throw std::runtime_error(path.string() + ": unexpected sweep header");
    std::vector<SweepRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        SweepRecord rec;
        rec.lambda = row[0];
        rec.K = row[1];
        rec.b = row[2];
        rec.b0 = row[3];
        rec.replica = static_cast<int>(row[4]);
        rec.seed = static_cast<std::uint64_t>(row[5]);
        rec.m_final = row[6];
        rec.restarts = static_cast<std::int64_t>(row[7]);
        rec.wall_ms = row[8];
        records.push_back(rec);
    }
    (void)grid;
    return records;
}

}  // namespace

void cmd_sweep(const CommandContext& ctx, bool fresh_start) {
    const Config config = Config::from_file(ctx.config_path);
    const SweepGrid grid = config.sweep_grid(ctx.seed);
    int workers = config.sweep_workers();
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    ensure_out_dir(ctx);

    const fs::path manifest_path = ctx.out_dir / "sweep_manifest.txt";
    const fs::path csv_path = ctx.out_dir / "sweep.csv";

    if (fresh_start) {
        fs::remove(manifest_path);
        fs::remove(csv_path);
    }

    std::set<std::pair<std::int64_t, int>> done;
    const bool resuming = fs::exists(manifest_path);
    if (resuming) {
        done = read_manifest(manifest_path, grid);
        if (!fs::exists(csv_path))
            throw std::runtime_error(csv_path.string() +
                                     ": missing alongside manifest; rerun with "
                                     "--fresh");
    }

    // Manifest and CSV are appended in lockstep as records flush, so an
    // interrupted sweep resumes from the last completed task.
    std::ofstream manifest(manifest_path, std::ios::app);
    if (!manifest)
        throw std::runtime_error("cannot open manifest: " +
                                 manifest_path.string());
    if (!resuming) {
        for (const auto& line : manifest_spec_lines(grid)) manifest << line << '\n';
        manifest.flush();
    }
    std::ofstream csv(csv_path, std::ios::app);
    if (!csv) throw std::runtime_error("cannot open: " + csv_path.string());
    if (!resuming) {
        csv << "lambda,K,b,b0,replica,seed,m_final,restarts,wall_ms\n";
        csv.flush();
    }

    run_sweep(grid, workers,
              [&](const SweepRecord& rec) {
                  char buf[256];
                  std::snprintf(buf, sizeof(buf),
                                "%.17g,%.17g,%.17g,%.17g,%d,%" PRIu64
                                ",%.17g,%" PRId64 ",%.3f",
                                rec.lambda, rec.K, rec.b, rec.b0, rec.replica,
                                rec.seed, rec.m_final, rec.restarts, rec.wall_ms);
                  csv << buf << '\n';
                  manifest << "done = " << rec.point << ',' << rec.replica
                           << '\n';
                  csv.flush();
                  manifest.flush();
                  if (!csv || !manifest)
                      throw std::runtime_error(
                          "sweep: output write failed; manifest reflects "
                          "completed points");
              },
              done.empty() ? nullptr : &done);
    csv.close();
    manifest.close();

    const std::vector<SweepRecord> records = read_sweep_csv(csv_path, grid);
    if (static_cast<std::int64_t>(records.size()) != grid.tasks())
        throw std::runtime_error(
            csv_path.string() + ": has " + std::to_string(records.size()) +
            " records, expected " + std::to_string(grid.tasks()));

    for (int ik = 0; ik < grid.K_axis.count(); ++ik) {
        for (int il = 0; il < grid.lambda_axis.count(); ++il) {
            const double K = grid.K_axis.at(ik);
            const double lambda = grid.lambda_axis.at(il);
            const SliceMatrix m = slice(records, grid, K, lambda);
            CsvFile out(ctx.out_dir / ("slice_K" + format_compact(K) +
                                       "_lambda" + format_compact(lambda) +
                                       ".csv"));
            std::string header = "b0";
            for (const double b : m.b_values)
                header += ",b=" + format_compact(b);
            out.line(header);
            for (std::size_t i = 0; i < m.b0_values.size(); ++i) {
                std::string row = format_compact(m.b0_values[i]);
                for (const double v : m.mean_abs_m[i])
                    row += "," + format_double(v);
                out.line(row);
            }
            out.close();
        }
    }
}

}  // namespace spinmarket
