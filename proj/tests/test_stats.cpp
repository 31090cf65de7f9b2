/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinmarket/rng.hpp"
#include "spinmarket/stats.hpp"

using namespace spinmarket;

namespace {

ReturnSeries series_of(std::vector<double> values) {
    ReturnSeries rs;
    rs.tau = 1;
    for (std::size_t i = 0; i < values.size(); ++i)
        rs.t.push_back(static_cast<std::int64_t>(i) + 2);
    rs.r = std::move(values);
    return rs;
}

std::vector<double> standard_normal(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u1 = rng.unit_pos();
        const double u2 = rng.unit();
        xs.push_back(std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2));
    }
    return xs;
}

double normal_density(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("histogram normalization and edge handling") {
    const std::vector<double> xs = {0.0, 0.1, 0.5, 0.999, 1.0, 0.25, 0.75};
    const Histogram h = make_histogram(xs, BinSpec::linear(0.0, 1.0, 4));
    CHECK(h.total == 7);
    std::int64_t count_sum = 0;
    double mass = 0.0;
    for (int i = 0; i < h.bins(); ++i) {
        count_sum += h.counts[i];
        mass += h.density(i) * h.width(i);
    }
    CHECK(count_sum == h.total);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.counts[3] == 3);  // 0.75, 0.999, and the inclusive upper edge 1.0
}

TEST_CASE("rescaled histogram rejects degenerate input") {
    CHECK_THROWS_AS(rescaled_histogram(series_of({}), 11), std::invalid_argument);
    CHECK_THROWS_AS(rescaled_histogram(series_of({0.5, 0.5, 0.5}), 11),
                    std::invalid_argument);
}

TEST_CASE("rescaled histogram of synthetic normals matches the density") {
    ReturnSeries rs = series_of(standard_normal(200000, 99));
    const Histogram h = rescaled_histogram(rs, 41);
    double mass = 0.0;
    for (int i = 0; i < h.bins(); ++i) mass += h.density(i) * h.width(i);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    for (int i = 0; i < h.bins(); ++i) {
        const double p = normal_density(h.center(i)) * h.width(i);
        const double expected = p * static_cast<double>(h.total);
        if (expected < 50.0) continue;  // skip bins dominated by Poisson noise
        const double sd = std::sqrt(expected * (1.0 - p));
        CHECK(std::abs(static_cast<double>(h.counts[i]) - expected) <
              5.0 * sd + 5.0);
    }
}

TEST_CASE("ccdf is a step curve from one to 1/total") {
    const ReturnSeries rs = series_of({0.5, -0.5, 0.5, -0.5});
    const CcdfCurve single = cumulative_abs_distribution(rs);
    REQUIRE(single.x.size() == 1);
    CHECK(single.x[0] == 0.5);
    CHECK(single.p[0] == 1.0);

    const ReturnSeries rs2 = series_of({0.1, -0.2, 0.3, 0.4});
    const CcdfCurve curve = cumulative_abs_distribution(rs2);
    REQUIRE(curve.x.size() == 4);
    CHECK(curve.p.front() == 1.0);
    CHECK(curve.p.back() == doctest::Approx(0.25));
    CHECK(std::is_sorted(curve.x.begin(), curve.x.end()));
    for (std::size_t i = 1; i < curve.p.size(); ++i)
        CHECK(curve.p[i] <= curve.p[i - 1]);
}

TEST_CASE("ccdf differences reproduce histogram bin masses") {
    const std::vector<double> xs = standard_normal(20000, 5);
    std::vector<double> mags;
    for (const double x : xs) mags.push_back(std::abs(x));
    const CcdfCurve curve = ccdf_of(mags);
    auto ccdf_at = [&](double x) {
        // P(|r| >= x): first curve point with value >= x.
        const auto it = std::lower_bound(curve.x.begin(), curve.x.end(), x);
        if (it == curve.x.end()) return 0.0;
        return curve.p[static_cast<std::size_t>(it - curve.x.begin())];
    };
    const Histogram h = make_histogram(mags, BinSpec::linear(0.0, 3.0, 30));
    for (int i = 0; i < h.bins(); ++i) {
        const double mass_by_ccdf = ccdf_at(h.edges[i]) - ccdf_at(h.edges[i + 1]);
        CHECK(mass_by_ccdf * static_cast<double>(mags.size()) ==
              doctest::Approx(static_cast<double>(h.counts[i])).epsilon(1e-12));
    }
}

TEST_CASE("autocorrelation basics") {
    std::vector<double> alternating;
    for (int i = 0; i < 400; ++i) alternating.push_back(i % 2 == 0 ? 1.0 : -1.0);
    const AcfCurve acf = autocorrelation(alternating, 4);
    CHECK(acf.c[0] == 1.0);
    CHECK(acf.c[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(acf.c[2] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(autocorrelation(std::vector<double>{1.0, 1.0, 1.0}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(autocorrelation(alternating, 400), std::invalid_argument);
    CHECK_THROWS_AS(autocorrelation(alternating, -1), std::invalid_argument);
}

TEST_CASE("autocorrelation of white noise stays inside the band") {
    const std::vector<double> xs = standard_normal(100000, 12345);
    const AcfCurve acf = autocorrelation(xs, 50);
    const double band = 3.0 / std::sqrt(static_cast<double>(xs.size()));
    for (int lag = 1; lag <= 50; ++lag)
        CHECK(std::abs(acf.c[static_cast<std::size_t>(lag)]) < band);
}

namespace {

AcfCurve synthetic_acf(double amplitude, double exponent, double cutoff,
                       int max_lag, double noise_level, std::uint64_t seed) {
    Rng rng(seed);
    AcfCurve acf;
    acf.c.push_back(1.0);
    for (int k = 1; k <= max_lag; ++k) {
        double value = amplitude * std::pow(k, -exponent) *
                       std::exp(-static_cast<double>(k) / cutoff);
        if (noise_level > 0.0)
            value *= 1.0 + noise_level * (2.0 * rng.unit() - 1.0);
        acf.c.push_back(value);
    }
    return acf;
}

}  // namespace

TEST_CASE("truncated power-law fit recovers synthetic parameters") {
    const AcfCurve acf = synthetic_acf(0.9, 0.35, 200.0, 400, 0.01, 21);
    const TruncPowerLawFit fit = fit_truncated_powerlaw(acf, 1, 400);
    CHECK(fit.amplitude == doctest::Approx(0.9).epsilon(0.05));
    CHECK(fit.exponent == doctest::Approx(0.35).epsilon(0.05));
    CHECK(fit.cutoff == doctest::Approx(200.0).epsilon(0.05));
}

TEST_CASE("pure power law yields an effectively infinite cutoff") {
    const AcfCurve acf = synthetic_acf(0.8, 0.5, 1e18, 300, 0.0, 3);
    const TruncPowerLawFit fit = fit_truncated_powerlaw(acf, 1, 300);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.02));
    CHECK(fit.cutoff > 3000.0);  // far beyond the window
}

TEST_CASE("pure exponential yields a near-zero power-law exponent") {
    const AcfCurve acf = synthetic_acf(0.7, 0.0, 80.0, 300, 0.0, 4);
    const TruncPowerLawFit fit = fit_truncated_powerlaw(acf, 1, 300);
    CHECK(std::abs(fit.exponent) < 0.05);
    CHECK(fit.cutoff == doctest::Approx(80.0).epsilon(0.02));
}

TEST_CASE("truncated power-law fit needs five positive points") {
    AcfCurve acf;
    acf.c = {1.0, 0.5, 0.4, -0.1, 0.3, 0.2, 0.2};
    CHECK_THROWS_AS(fit_truncated_powerlaw(acf, 1, 6), std::invalid_argument);
    const AcfCurve ok = synthetic_acf(0.5, 0.4, 50.0, 10, 0.0, 5);
    CHECK_NOTHROW(fit_truncated_powerlaw(ok, 1, 10));
}

TEST_CASE("exponential comparison fit") {
    const AcfCurve acf = synthetic_acf(0.7, 0.0, 80.0, 200, 0.0, 6);
    const ExponentialFit fit = fit_exponential(acf, 1, 200);
    CHECK(fit.cutoff == doctest::Approx(80.0).epsilon(0.01));
    CHECK(fit.residual_rms < 1e-10);
}

namespace {

std::vector<double> pareto_sample(double exponent, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs.push_back(std::pow(rng.unit_pos(), -1.0 / exponent));
    return xs;
}

}  // namespace

TEST_CASE("tail exponent of an exact power-law sample") {
    const std::vector<double> xs = pareto_sample(3.0, 1000000, 101);
    const CcdfCurve curve = ccdf_of(xs);
    const TailFit fit = tail_exponent(curve, 0.90, 0.999);
    CHECK(std::abs(fit.exponent - 3.0) <= 0.02);
    CHECK(fit.power_law);

    // Density view: exponent is one larger.
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const Histogram h = make_histogram(
        xs, BinSpec::logarithmic(*lo, *hi * (1 + 1e-12), 1.15));
    const TailFit density_fit = tail_exponent(h, 0.90, 0.9995);
    CHECK(std::abs(density_fit.exponent - 4.0) <= 0.2);
}

TEST_CASE("non-power-law tails are flagged") {
    Rng rng(77);
    std::vector<double> exponential;
    for (int i = 0; i < 200000; ++i)
        exponential.push_back(-std::log(rng.unit_pos()));
    const TailFit exp_fit = tail_exponent(ccdf_of(exponential), 0.9, 0.9995);
    CHECK_FALSE(exp_fit.power_law);

    std::vector<double> gaussian;
    for (const double x : standard_normal(200000, 123))
        gaussian.push_back(std::abs(x) + 1e-9);
    const TailFit gauss_fit = tail_exponent(ccdf_of(gaussian), 0.9, 0.9995);
    CHECK_FALSE(gauss_fit.power_law);
}

TEST_CASE("tail exponent needs ten window points") {
    const std::vector<double> xs = pareto_sample(2.0, 30, 3);
    CHECK_THROWS_AS(tail_exponent(ccdf_of(xs), 0.5, 0.7), std::invalid_argument);
}

TEST_CASE("interevent times with an absolute threshold on a periodic series") {
    // Losses of size C every other step; Q = C catches exactly those.
    std::vector<double> values;
    for (int i = 0; i < 40; ++i) values.push_back(i % 2 == 0 ? -3.0 : 0.5);
    const ReturnSeries rs = series_of(values);
    const IetSample sample = interevent_times_absolute(rs, 3.0, EventKind::loss);
    CHECK(sample.events == 20);
    REQUIRE(sample.intervals.size() == 19);
    for (const auto dt : sample.intervals) CHECK(dt == 2);

    const IetSample profits =
        interevent_times_absolute(rs, 3.0, EventKind::profit);
    CHECK(profits.events == 0);
    CHECK(profits.flagged);
}

TEST_CASE("sigma-scaled interevent thresholds and scale invariance") {
    Rng rng(8);
    std::vector<double> values;
    for (int i = 0; i < 5000; ++i) values.push_back(2.0 * rng.unit() - 1.0);
    for (int i = 200; i < 5000; i += 200) values[static_cast<std::size_t>(i)] = -9.0;
    ReturnSeries rs = series_of(values);
    const IetSample base = interevent_times(rs, 5.0, EventKind::loss);
    CHECK(base.events == 24);
    for (const auto dt : base.intervals) CHECK(dt == 200);

    // Multiplying every return by a positive constant changes nothing.
    ReturnSeries scaled = rs;
    for (double& r : scaled.r) r *= 37.5;
    const IetSample same = interevent_times(scaled, 5.0, EventKind::loss);
    CHECK(same.intervals == base.intervals);

    const IetSample none = interevent_times(rs, 1e6, EventKind::loss);
    CHECK(none.events == 0);
    CHECK(none.flagged);
    CHECK(none.intervals.empty());
}

TEST_CASE("interevent intervals never span an excluded gap") {
    ReturnSeries rs = series_of(std::vector<double>(30, 0.1));
    rs.r[4] = -5.0;   // t = 6
    rs.r[14] = -5.0;  // t = 16
    rs.r[24] = -5.0;  // t = 26
    SUBCASE("no gap keeps both intervals") {
        const IetSample s = interevent_times_absolute(rs, 4.0, EventKind::loss);
        CHECK(s.intervals == std::vector<std::int64_t>{10, 10});
    }
    SUBCASE("a gap drops exactly the spanning pair") {
        rs.excluded = {20};
        const IetSample s = interevent_times_absolute(rs, 4.0, EventKind::loss);
        CHECK(s.intervals == std::vector<std::int64_t>{10});
    }
}

TEST_CASE("interevent histogram is density-normalized on integer log bins") {
    Rng rng(13);
    IetSample sample;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.unit_pos();
        sample.intervals.push_back(
            std::max<std::int64_t>(1, std::llround(std::pow(u, -1.0 / 1.5))));
    }
    const Histogram h = iet_distribution(sample, 1.25);
    CHECK(h.integer_bins);
    double mass = 0.0;
    for (int i = 0; i < h.bins(); ++i) mass += h.density(i) * h.width(i);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    // Every interval landed in a bin.
    std::int64_t count_sum = 0;
    for (const auto c : h.counts) count_sum += c;
    CHECK(count_sum == static_cast<std::int64_t>(sample.intervals.size()));

    IetSample tiny;
    tiny.intervals = {5};
    CHECK_THROWS_AS(iet_distribution(tiny, 1.25), std::invalid_argument);
}

TEST_CASE("rescaled histogram is invariant under market-depth changes") {
    ModelParams params;
    params.J = 1.0;
    params.lambda = 1.0;
    params.n = 8;
    params.noise = WmParams{5.0, 2.0, 0.2};
    params.T = 2000;
    params.seed = 40;
    const TimeSeries ts = simulate(params);

    TimeSeries shallow = ts;
    shallow.params.market_depth = 2.0 * ts.params.depth();
    const ReturnSeries full = build_return_series(ts, 1);
    const ReturnSeries halved = build_return_series(shallow, 1);
    REQUIRE(full.size() == halved.size());
    for (std::size_t i = 0; i < full.size(); ++i)
        CHECK(halved.r[i] == 0.5 * full.r[i]);

    const Histogram a = rescaled_histogram(full, 41);
    const Histogram b = rescaled_histogram(halved, 41);
    REQUIRE(a.bins() == b.bins());
    for (int i = 0; i < a.bins(); ++i) {
        CHECK(a.counts[i] == b.counts[i]);
        CHECK(a.edges[i] == b.edges[i]);
    }
}

TEST_CASE("power-law intervals are straight on log-log") {
    Rng rng(29);
    IetSample sample;
    for (int i = 0; i < 50000; ++i)
        sample.intervals.push_back(std::max<std::int64_t>(
            1, std::llround(std::pow(rng.unit_pos(), -1.0 / 1.5))));
    const Histogram h = iet_distribution(sample, 1.4);
    std::vector<double> xs, ys;
    for (int i = 0; i < h.bins(); ++i) {
        if (h.counts[i] < 30) continue;
        xs.push_back(std::log(h.center(i)));
        ys.push_back(std::log(h.density(i)));
    }
    REQUIRE(xs.size() >= 5);
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    // Density exponent 1 + alpha = 2.5 for a Pareto(1.5) interval law.
    CHECK(slope == doctest::Approx(-2.5).epsilon(0.06));
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(std::abs(ys[i] - (intercept + slope * xs[i])) < 0.25);
}

TEST_CASE("exponential intervals are straight on lin-log") {
    Rng rng(17);
    IetSample sample;
    for (int i = 0; i < 50000; ++i)
        sample.intervals.push_back(
            1 + static_cast<std::int64_t>(-30.0 * std::log(rng.unit_pos())));
    const Histogram h = iet_distribution(sample, 1.3);
    // Regress log density on dt; an exponential law is linear there.
    std::vector<double> xs, ys;
    for (int i = 0; i < h.bins(); ++i) {
        if (h.counts[i] < 30) continue;
        xs.push_back(h.center(i));
        ys.push_back(std::log(h.density(i)));
    }
    REQUIRE(xs.size() >= 6);
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    CHECK(slope == doctest::Approx(-1.0 / 30.0).epsilon(0.05));
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        worst = std::max(worst, std::abs(ys[i] - (intercept + slope * xs[i])));
    CHECK(worst < 0.2);
}
