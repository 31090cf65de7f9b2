/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinmarket {

namespace {

// Least squares via normal equations, k <= 3 columns, Gaussian elimination
// with partial pivoting. Returns false on a singular system.
bool solve_least_squares(const std::vector<std::vector<double>>& cols,
                         const std::vector<double>& y, std::vector<double>& beta) {
    const std::size_t k = cols.size();
    const std::size_t n = y.size();
    double a[3][4] = {};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += cols[i][r] * cols[j][r];
            a[i][j] = s;
        }
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += cols[i][r] * y[r];
        a[i][k] = s;
    }
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t pivot = p;
        for (std::size_t i = p + 1; i < k; ++i)
            if (std::abs(a[i][p]) > std::abs(a[pivot][p])) pivot = i;
        if (std::abs(a[pivot][p]) < 1e-300) return false;
        if (pivot != p)
            for (std::size_t j = 0; j <= k; ++j) std::swap(a[p][j], a[pivot][j]);
        for (std::size_t i = p + 1; i < k; ++i) {
            const double f = a[i][p] / a[p][p];
            for (std::size_t j = p; j <= k; ++j) a[i][j] -= f * a[p][j];
        }
    }
    beta.assign(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
        double s = a[i][k];
        for (std::size_t j = i + 1; j < k; ++j) s -= a[i][j] * beta[j];
        beta[i] = s / a[i][i];
    }
    return true;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_rms = 0.0;
};

LineFit fit_line(std::span<const double> u, std::span<const double> v) {
    const std::size_t n = u.size();
    double su = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        su += u[i];
        sv += v[i];
    }
    const double mu = su / n;
    const double mv = sv / n;
    double suu = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    LineFit fit;
    if (suu <= 0.0) throw std::invalid_argument("stats: degenerate regression");
    fit.slope = suv / suu;
    fit.intercept = mv - fit.slope * mu;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = v[i] - (fit.intercept + fit.slope * u[i]);
        ssr += e * e;
    }
    fit.residual_rms = std::sqrt(ssr / n);
    fit.slope_stderr =
        n > 2 ? std::sqrt(ssr / (static_cast<double>(n) - 2.0) / suu) : 0.0;
    return fit;
}

}  // namespace

double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("stats: empty series");
    double s = 0.0;
    for (const double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs) {
    const double mu = mean_of(xs);
    double s = 0.0;
    for (const double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size());
}

double stddev_of(std::span<const double> xs) { return std::sqrt(variance_of(xs)); }

BinSpec BinSpec::linear(double lo, double hi, int count) {
    if (!(hi > lo)) throw std::invalid_argument("bins: need hi > lo");
    if (count < 1) throw std::invalid_argument("bins: need at least one bin");
    return BinSpec{BinScale::linear, lo, hi, count, 0.0};
}

BinSpec BinSpec::logarithmic(double lo, double hi, double ratio) {
    if (!(lo > 0.0)) throw std::invalid_argument("bins: log bins need lo > 0");
    if (!(hi > lo)) throw std::invalid_argument("bins: need hi > lo");
    if (!(ratio > 1.0)) throw std::invalid_argument("bins: ratio must be > 1");
    return BinSpec{BinScale::logarithmic, lo, hi, 0, ratio};
}

double Histogram::center(int i) const {
    if (scale == BinScale::logarithmic) {
        if (integer_bins) return std::sqrt(edges[i] * (edges[i + 1] - 1.0));
        return std::sqrt(edges[i] * edges[i + 1]);
    }
    return 0.5 * (edges[i] + edges[i + 1]);
}

double Histogram::density(int i) const {
    if (total == 0) return 0.0;
    return static_cast<double>(counts[i]) /
           (static_cast<double>(total) * width(i));
}

Histogram histogram_with_edges(std::span<const double> xs,
                               std::vector<double> edges, BinScale scale) {
    if (edges.size() < 2)
        throw std::invalid_argument("stats: need at least one bin");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw std::invalid_argument("stats: edges must strictly increase");

    Histogram hist;
    hist.scale = scale;
    hist.edges = std::move(edges);
    hist.counts.assign(hist.edges.size() - 1, 0);

    // Lower-inclusive bins; the final upper edge is inclusive too so the
    // maximum sample is not lost.
    for (const double x : xs) {
        if (x < hist.edges.front() || x > hist.edges.back()) continue;
        std::size_t idx;
        if (x == hist.edges.back()) {
            idx = hist.counts.size() - 1;
        } else {
            idx = static_cast<std::size_t>(
                      std::upper_bound(hist.edges.begin(), hist.edges.end(), x) -
                      hist.edges.begin()) -
                  1;
        }
        ++hist.counts[idx];
        ++hist.total;
    }
    return hist;
}

Histogram make_histogram(std::span<const double> xs, const BinSpec& spec) {
    std::vector<double> edges;
    if (spec.scale == BinScale::linear) {
        edges.reserve(static_cast<std::size_t>(spec.count) + 1);
        const double w = (spec.hi - spec.lo) / spec.count;
        for (int i = 0; i <= spec.count; ++i)
            edges.push_back(i == spec.count ? spec.hi : spec.lo + i * w);
    } else {
        double e = spec.lo;
        edges.push_back(e);
        while (e < spec.hi) {
            e *= spec.ratio;
            edges.push_back(e);
        }
    }
    return histogram_with_edges(xs, std::move(edges), spec.scale);
}

Histogram rescaled_histogram(const ReturnSeries& rs, const BinSpec& spec) {
    if (rs.r.empty()) throw std::invalid_argument("stats: empty return series");
    const double sigma = stddev_of(rs.r);
    if (!(sigma > 0.0))
        throw std::invalid_argument("stats: zero-variance return series");
    std::vector<double> scaled;
    scaled.reserve(rs.r.size());
    for (const double r : rs.r) scaled.push_back(r / sigma);
    return make_histogram(scaled, spec);
}

Histogram rescaled_histogram(const ReturnSeries& rs, int bins) {
    if (rs.r.empty()) throw std::invalid_argument("stats: empty return series");
    const double sigma = stddev_of(rs.r);
    if (!(sigma > 0.0))
        throw std::invalid_argument("stats: zero-variance return series");
    if (bins % 2 == 0) ++bins;
    double max_abs = 0.0;
    for (const double r : rs.r) max_abs = std::max(max_abs, std::abs(r / sigma));
    const double hi = std::nextafter(max_abs, std::numeric_limits<double>::max());
    return rescaled_histogram(rs, BinSpec::linear(-hi, hi, bins));
}

CcdfCurve ccdf_of(std::span<const double> magnitudes) {
    if (magnitudes.empty())
        throw std::invalid_argument("stats: empty sample for ccdf");
    std::vector<double> sorted(magnitudes.begin(), magnitudes.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    CcdfCurve curve;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        curve.x.push_back(sorted[i]);
        curve.p.push_back(static_cast<double>(sorted.size() - i) / n);
        i = j;
    }
    return curve;
}

CcdfCurve cumulative_abs_distribution(const ReturnSeries& rs) {
    if (rs.r.empty()) throw std::invalid_argument("stats: empty return series");
    std::vector<double> mags;
    mags.reserve(rs.r.size());
    for (const double r : rs.r) mags.push_back(std::abs(r));
    return ccdf_of(mags);
}

AcfCurve autocorrelation(std::span<const double> series, int max_lag) {
    const auto n = static_cast<std::int64_t>(series.size());
    if (max_lag < 0) throw std::invalid_argument("stats: max_lag must be >= 0");
    if (n <= max_lag)
        throw std::invalid_argument("stats: series shorter than max_lag");
    const double mu = mean_of(series);
    double var = 0.0;
    for (const double x : series) var += (x - mu) * (x - mu);
    var /= static_cast<double>(n);
    if (!(var > 0.0)) throw std::invalid_argument("stats: zero-variance series");

    AcfCurve acf;
    acf.c.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);
    acf.c[0] = 1.0;
    for (int lag = 1; lag <= max_lag; ++lag) {
        double s = 0.0;
        for (std::int64_t i = 0; i + lag < n; ++i)
            s += (series[static_cast<std::size_t>(i)] - mu) *
                 (series[static_cast<std::size_t>(i + lag)] - mu);
        const double c = s / static_cast<double>(n - lag) / var;
        acf.c[static_cast<std::size_t>(lag)] = std::clamp(c, -1.0, 1.0);
    }
    return acf;
}

namespace {

// Contiguous window of positive ACF values starting at lag_lo; stops at the
// first non-positive value.
std::vector<int> usable_lags(const AcfCurve& acf, int lag_lo, int lag_hi) {
    if (lag_lo < 1) throw std::invalid_argument("stats: fit window starts at lag >= 1");
    if (lag_hi > acf.max_lag()) lag_hi = acf.max_lag();
    std::vector<int> lags;
    for (int k = lag_lo; k <= lag_hi; ++k) {
        if (!(acf.c[static_cast<std::size_t>(k)] > 0.0)) break;
        lags.push_back(k);
    }
    return lags;
}

}  // namespace

TruncPowerLawFit fit_truncated_powerlaw(const AcfCurve& acf, int lag_lo,
                                        int lag_hi) {
    const auto lags = usable_lags(acf, lag_lo, lag_hi);
    if (lags.size() < 5)
        throw std::invalid_argument(
            "stats: fewer than 5 positive ACF points in the fit window");

    const std::size_t n = lags.size();
    std::vector<double> ones(n, 1.0), neg_log_k(n), neg_k(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        neg_log_k[i] = -std::log(static_cast<double>(lags[i]));
        neg_k[i] = -static_cast<double>(lags[i]);
        y[i] = std::log(acf.c[static_cast<std::size_t>(lags[i])]);
    }

    std::vector<double> beta;
    bool clamped = false;
    if (!solve_least_squares({ones, neg_log_k, neg_k}, y, beta))
        throw std::runtime_error("stats: singular truncated power-law fit");
    if (beta[2] < 0.0) {
        // Negative decay rate means no exponential truncation in the window.
        clamped = true;
        if (!solve_least_squares({ones, neg_log_k}, y, beta))
            throw std::runtime_error("stats: singular power-law fit");
        beta.push_back(0.0);
    }

    TruncPowerLawFit fit;
    fit.amplitude = std::exp(beta[0]);
    fit.exponent = beta[1];
    fit.cutoff = clamped || beta[2] == 0.0
                     ? std::numeric_limits<double>::infinity()
                     : 1.0 / beta[2];
    fit.lag_lo = lags.front();
    fit.lag_hi = lags.back();
    fit.points = static_cast<int>(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = beta[0] + beta[1] * neg_log_k[i] + beta[2] * neg_k[i];
        ssr += (y[i] - pred) * (y[i] - pred);
    }
    fit.residual_rms = std::sqrt(ssr / static_cast<double>(n));
    return fit;
}

ExponentialFit fit_exponential(const AcfCurve& acf, int lag_lo, int lag_hi) {
    const auto lags = usable_lags(acf, lag_lo, lag_hi);
    if (lags.size() < 3)
        throw std::invalid_argument(
            "stats: fewer than 3 positive ACF points in the fit window");
    const std::size_t n = lags.size();
    std::vector<double> u(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = static_cast<double>(lags[i]);
        y[i] = std::log(acf.c[static_cast<std::size_t>(lags[i])]);
    }
    const LineFit line = fit_line(u, y);
    ExponentialFit fit;
    fit.amplitude = std::exp(line.intercept);
    fit.cutoff = line.slope < 0.0 ? -1.0 / line.slope
                                  : std::numeric_limits<double>::infinity();
    fit.residual_rms = line.residual_rms;
    fit.points = static_cast<int>(n);
    return fit;
}

namespace {

TailFit tail_fit_loglog(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    if (n < 10)
        throw std::invalid_argument("stats: fewer than 10 points in tail window");
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::log(xs[i]);
        v[i] = std::log(ys[i]);
    }
    const LineFit full = fit_line(u, v);
    const std::size_t half = n / 2;
    const LineFit first =
        fit_line(std::span(u).subspan(0, half), std::span(v).subspan(0, half));
    const LineFit second =
        fit_line(std::span(u).subspan(half), std::span(v).subspan(half));

    TailFit fit;
    fit.exponent = -full.slope;
    fit.std_error = full.slope_stderr;
    fit.points = static_cast<int>(n);
    fit.drift = std::abs(first.slope - second.slope) /
                std::max(std::abs(full.slope), 1e-12);
    fit.power_law = fit.drift <= 0.2;
    return fit;
}

}  // namespace

TailFit tail_exponent(const Histogram& hist, double q_lo, double q_hi) {
    if (!(0.0 < q_lo && q_lo < q_hi && q_hi <= 1.0))
        throw std::invalid_argument("stats: bad quantile window");
    if (hist.total == 0) throw std::invalid_argument("stats: empty histogram");
    // Sample quantile -> x position, from the binned cumulative counts.
    auto quantile_x = [&](double q) {
        const auto target = q * static_cast<double>(hist.total);
        std::int64_t cum = 0;
        for (int i = 0; i < hist.bins(); ++i) {
            cum += hist.counts[i];
            if (static_cast<double>(cum) >= target) return hist.center(i);
        }
        return hist.center(hist.bins() - 1);
    };
    const double x_lo = quantile_x(q_lo);
    const double x_hi = quantile_x(q_hi);
    std::vector<double> xs, ys;
    for (int i = 0; i < hist.bins(); ++i) {
        const double c = hist.center(i);
        if (c < x_lo || c > x_hi) continue;
        if (hist.counts[i] <= 0 || !(c > 0.0)) continue;
        xs.push_back(c);
        ys.push_back(hist.density(i));
    }
    return tail_fit_loglog(xs, ys);
}

TailFit tail_exponent(const CcdfCurve& curve, double q_lo, double q_hi) {
    if (!(0.0 < q_lo && q_lo < q_hi && q_hi <= 1.0))
        throw std::invalid_argument("stats: bad quantile window");
    std::vector<double> xs, ys;
    const double p_hi = 1.0 - q_lo;  // upper CCDF bound of the window
    const double p_lo = 1.0 - q_hi;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (curve.p[i] > p_hi || curve.p[i] < p_lo) continue;
        if (!(curve.x[i] > 0.0)) continue;
        xs.push_back(curve.x[i]);
        ys.push_back(curve.p[i]);
    }
    return tail_fit_loglog(xs, ys);
}

namespace {

IetSample interevent_from_threshold(const ReturnSeries& rs, double rq, double q,
                                    EventKind kind) {
    IetSample sample;
    sample.threshold_multiplier = rq;
    sample.threshold = q;
    sample.kind = kind;

    std::vector<std::int64_t> event_times;
    for (std::size_t i = 0; i < rs.r.size(); ++i) {
        const bool hit = kind == EventKind::loss ? rs.r[i] <= -q : rs.r[i] >= q;
        if (hit) event_times.push_back(rs.t[i]);
    }
    sample.events = static_cast<std::int64_t>(event_times.size());
    sample.flagged = sample.events < 2;

    for (std::size_t k = 1; k < event_times.size(); ++k) {
        const std::int64_t lo = event_times[k - 1];
        const std::int64_t hi = event_times[k];
        // Drop pairs separated by an excluded (restart-window) value.
        const auto it =
            std::upper_bound(rs.excluded.begin(), rs.excluded.end(), lo);
        if (it != rs.excluded.end() && *it < hi) continue;
        sample.intervals.push_back(hi - lo);
    }
    return sample;
}

}  // namespace

IetSample interevent_times(const ReturnSeries& rs, double rq, EventKind kind) {
    if (rs.r.empty()) throw std::invalid_argument("stats: empty return series");
    if (!(rq > 0.0)) throw std::invalid_argument("stats: R_Q must be > 0");
    const double sigma = stddev_of(rs.r);
    if (!(sigma > 0.0))
        throw std::invalid_argument("stats: zero-variance return series");
    return interevent_from_threshold(rs, rq, rq * sigma, kind);
}

IetSample interevent_times_absolute(const ReturnSeries& rs, double q,
                                    EventKind kind) {
    if (rs.r.empty()) throw std::invalid_argument("stats: empty return series");
    if (!(q > 0.0)) throw std::invalid_argument("stats: Q must be > 0");
    return interevent_from_threshold(rs, 0.0, q, kind);
}

Histogram iet_distribution(const IetSample& sample, double ratio) {
    if (sample.intervals.size() < 2)
        throw std::invalid_argument("stats: need at least 2 intervals");
    if (!(ratio > 1.0)) throw std::invalid_argument("stats: ratio must be > 1");
    const auto [min_it, max_it] =
        std::minmax_element(sample.intervals.begin(), sample.intervals.end());
    std::vector<double> values;
    values.reserve(sample.intervals.size());
    for (const auto dt : sample.intervals)
        values.push_back(static_cast<double>(dt));

    // Geometric growth snapped to integer edges, at least one integer per
    // bin, so bin width counts the covered integers and the density is a
    // proper per-unit estimate for the discrete intervals.
    std::vector<double> edges;
    std::int64_t e = *min_it;
    edges.push_back(static_cast<double>(e));
    while (e <= *max_it) {
        auto next = static_cast<std::int64_t>(
            std::ceil(static_cast<double>(e) * ratio));
        if (next <= e) next = e + 1;
        edges.push_back(static_cast<double>(next));
        e = next;
    }
    Histogram hist =
        histogram_with_edges(values, std::move(edges), BinScale::logarithmic);
    hist.integer_bins = true;
    return hist;
}

}  // namespace spinmarket
