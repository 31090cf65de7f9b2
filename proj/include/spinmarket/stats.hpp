/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinmarket/market.hpp"

namespace spinmarket {

enum class BinScale { linear, logarithmic };

/// Bin layout. Linear: `count` equal bins on [lo, hi]. Logarithmic: geometric
/// edges lo * ratio^k covering [lo, hi] (count derived from the ratio).
struct BinSpec {
    BinScale scale = BinScale::linear;
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;        // linear only
    double ratio = 1.25;  // logarithmic only

    static BinSpec linear(double lo, double hi, int count);
    static BinSpec logarithmic(double lo, double hi, double ratio = 1.25);
};

/// Density-normalized histogram: sum of density * bin width is 1 over the
/// binned samples. Empty bins keep zero density rather than being dropped.
struct Histogram {
    std::vector<double> edges;  // strictly increasing, size = bins + 1
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;  // samples inside [edges.front(), edges.back()]
    BinScale scale = BinScale::linear;
    // Set for histograms of integer quantities whose edges are integers;
    // bin width then equals the number of covered integers and the bin
    // representative is the geometric mean of the covered integer range.
    bool integer_bins = false;

    int bins() const { return static_cast<int>(counts.size()); }
    double width(int i) const { return edges[i + 1] - edges[i]; }
    /// Bin representative: midpoint for linear bins, geometric mean for
    /// logarithmic ones.
    double center(int i) const;
    double density(int i) const;
};

/// Histogram over caller-supplied edges (strictly increasing). Bins are
/// lower-inclusive; the final upper edge is inclusive as well.
Histogram histogram_with_edges(std::span<const double> xs,
                               std::vector<double> edges, BinScale scale);

Histogram make_histogram(std::span<const double> xs, const BinSpec& spec);

/// Histogram of r / sigma(r). Throws on an empty or zero-variance series.
Histogram rescaled_histogram(const ReturnSeries& rs, const BinSpec& spec);

/// Symmetric linear bins sized from the data; `bins` must be odd so zero is
/// a bin center.
Histogram rescaled_histogram(const ReturnSeries& rs, int bins = 101);

/// P(|r| >= x) evaluated at each distinct |r|; a non-increasing step curve
/// from 1 down to 1/total.
struct CcdfCurve {
    std::vector<double> x;
    std::vector<double> p;
};

CcdfCurve cumulative_abs_distribution(const ReturnSeries& rs);
CcdfCurve ccdf_of(std::span<const double> magnitudes);

/// C(dt) for dt = 0..max_lag, with the full-sample mean and variance in the
/// normalization; C(0) == 1 exactly.
struct AcfCurve {
    std::vector<double> c;  // index = lag

    int max_lag() const { return static_cast<int>(c.size()) - 1; }
};

AcfCurve autocorrelation(std::span<const double> series, int max_lag);

/// a * dt^-gamma * exp(-dt / cutoff) fitted to positive ACF values in log
/// space over [lag_lo, lag_hi]. The window shrinks past non-positive values;
/// fewer than 5 usable points is an error. An unconstrained negative decay
/// rate is clamped to zero, reported as an infinite cutoff.
struct TruncPowerLawFit {
    double amplitude = 0.0;
    double exponent = 0.0;  // gamma
    double cutoff = 0.0;    // dt_c, +inf when the exponential term vanishes
    double residual_rms = 0.0;
    int lag_lo = 0, lag_hi = 0, points = 0;
};

TruncPowerLawFit fit_truncated_powerlaw(const AcfCurve& acf, int lag_lo,
                                        int lag_hi);

/// Pure exponential a * exp(-dt / cutoff) on the same window; baseline for
/// comparing fit quality.
struct ExponentialFit {
    double amplitude = 0.0;
    double cutoff = 0.0;
    double residual_rms = 0.0;
    int points = 0;
};

ExponentialFit fit_exponential(const AcfCurve& acf, int lag_lo, int lag_hi);

/// Log-log regression slope over a quantile window of the tail,
/// sign-normalized to a positive exponent. `drift` is the relative slope
/// change between the two window halves; above 20% the tail is flagged as
/// not power-law.
struct TailFit {
    double exponent = 0.0;
    double std_error = 0.0;
    double drift = 0.0;
    bool power_law = false;
    int points = 0;
};

/// Tail exponent of a density histogram (uses bins between the q_lo and q_hi
/// sample quantiles with positive density).
TailFit tail_exponent(const Histogram& hist, double q_lo, double q_hi);

/// Tail exponent of a CCDF curve over the same kind of quantile window.
/// Note the CCDF exponent is one less than the matching density exponent.
TailFit tail_exponent(const CcdfCurve& curve, double q_lo, double q_hi);

enum class EventKind { loss, profit };

/// Interevent intervals of threshold exceedances of a return series.
struct IetSample {
    double threshold_multiplier = 0.0;  // R_Q; 0 when an absolute Q was given
    double threshold = 0.0;             // Q in return units
    EventKind kind = EventKind::loss;
    std::vector<std::int64_t> intervals;  // rounds between consecutive events
    std::int64_t events = 0;
    bool flagged = false;  // fewer than 2 events: empty, not an error
};

/// Q = rq * sigma(rs); events are values r <= -Q (loss) or r >= +Q (profit).
/// Interval pairs separated by an excluded value are dropped.
IetSample interevent_times(const ReturnSeries& rs, double rq, EventKind kind);

/// Same with an absolute threshold Q instead of a sigma multiple.
IetSample interevent_times_absolute(const ReturnSeries& rs, double q,
                                    EventKind kind);

/// Density-normalized histogram of the intervals on geometric bins.
Histogram iet_distribution(const IetSample& sample, double ratio = 1.25);

double mean_of(std::span<const double> xs);
double variance_of(std::span<const double> xs);  // population variance
double stddev_of(std::span<const double> xs);

}  // namespace spinmarket
