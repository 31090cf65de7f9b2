/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace spinmarket {

namespace {

constexpr int kMaxIter = 1000;
constexpr double kEps = 1e-16;

void check_domain(double a, double x) {
    if (!(a > 0.0))
        throw std::invalid_argument("incomplete gamma: a must be > 0");
    if (!(x >= 0.0))
        throw std::invalid_argument("incomplete gamma: x must be >= 0");
}

// gamma(a, x) by power series; converges quickly for x < a + 1.
double lower_by_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x));
}

// Gamma(a, x) by modified Lentz continued fraction; for x >= a + 1.
double upper_by_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x));
}

}  // namespace

double lower_incomplete_gamma(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return lower_by_series(a, x);
    return std::tgamma(a) - upper_by_cf(a, x);
}

double upper_incomplete_gamma(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return std::tgamma(a);
    if (x < a + 1.0) return std::tgamma(a) - lower_by_series(a, x);
    return upper_by_cf(a, x);
}

void IetModel::validate() const {
    if (!(alpha > 0.0))
        throw std::invalid_argument("iet model: alpha must be > 0");
    if (!(tau_q > 0.0))
        throw std::invalid_argument("iet model: tau_q must be > 0");
    if (branch == IetBranch::minus && !(alpha < 1.0))
        throw std::invalid_argument(
            "iet model: minus branch needs alpha < 1");
}

double psi_q(const IetModel& model, double dt) {
    model.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("psi_q: dt must be > 0");
    const double y = dt / model.tau_q;
    if (model.branch == IetBranch::plus) {
        const double a = 1.0 + model.alpha;
        return model.alpha / model.tau_q * std::pow(y, -a) *
               lower_incomplete_gamma(a, y);
    }
    const double a = 1.0 - model.alpha;
    return model.alpha / model.tau_q * std::pow(y, -a) *
           upper_incomplete_gamma(a, y);
}

double psi_q_cdf(const IetModel& model, double dt) {
    model.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("psi_q_cdf: dt must be > 0");
    const double y = dt / model.tau_q;
    // Integrating psi by parts collapses to these closed forms.
    if (model.branch == IetBranch::plus)
        return 1.0 - std::exp(-y) -
               std::pow(y, -model.alpha) *
                   lower_incomplete_gamma(1.0 + model.alpha, y);
    return 1.0 - std::exp(-y) +
           std::pow(y, model.alpha) *
               upper_incomplete_gamma(1.0 - model.alpha, y);
}

namespace {

struct FitPoint {
    double dt;
    double log_density;
    double weight;
};

double objective(const std::vector<FitPoint>& pts, IetBranch branch,
                 double alpha, double tau) {
    if (!(alpha > 0.0) || !(tau > 0.0)) return 1e100;
    if (branch == IetBranch::minus && alpha >= 0.999) return 1e100;
    if (alpha > 50.0 || tau < 1e-9 || tau > 1e15) return 1e100;
    const IetModel model{alpha, tau, branch};
    double ss = 0.0;
    for (const auto& p : pts) {
        const double psi = psi_q(model, p.dt);
        if (!(psi > 0.0) || !std::isfinite(psi)) return 1e100;
        const double d = std::log(psi) - p.log_density;
        ss += p.weight * d * d;
    }
    return ss;
}

struct Simplex2Result {
    double x0 = 0.0, x1 = 0.0, value = 1e100;
    bool converged = false;
};

// Nelder-Mead in two dimensions; enough for the (log alpha, log tau) search.
Simplex2Result nelder_mead_2d(const std::function<double(double, double)>& f,
                              double x0, double x1, double step, int max_iter) {
    struct Vertex {
        std::array<double, 2> x;
        double v;
    };
    std::array<Vertex, 3> s{Vertex{{x0, x1}, f(x0, x1)},
                            Vertex{{x0 + step, x1}, f(x0 + step, x1)},
                            Vertex{{x0, x1 + step}, f(x0, x1 + step)}};
    auto order = [&] {
        std::sort(s.begin(), s.end(),
                  [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    };
    order();
    Simplex2Result result;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(s[2].v - s[0].v) <
            1e-12 * (std::abs(s[0].v) + std::abs(s[2].v)) + 1e-14) {
            result.converged = true;
            break;
        }
        const double cx = 0.5 * (s[0].x[0] + s[1].x[0]);
        const double cy = 0.5 * (s[0].x[1] + s[1].x[1]);
        auto try_point = [&](double t) {
            return Vertex{{cx + t * (cx - s[2].x[0]), cy + t * (cy - s[2].x[1])},
                          0.0};
        };
        Vertex refl = try_point(1.0);
        refl.v = f(refl.x[0], refl.x[1]);
        if (refl.v < s[0].v) {
            Vertex exp_ = try_point(2.0);
            exp_.v = f(exp_.x[0], exp_.x[1]);
            s[2] = exp_.v < refl.v ? exp_ : refl;
        } else if (refl.v < s[1].v) {
            s[2] = refl;
        } else {
            Vertex contr = try_point(refl.v < s[2].v ? 0.5 : -0.5);
            contr.v = f(contr.x[0], contr.x[1]);
            if (contr.v < std::min(refl.v, s[2].v)) {
                s[2] = contr;
            } else {
                // Shrink toward the best vertex.
                for (int i = 1; i < 3; ++i) {
                    s[i].x[0] = 0.5 * (s[i].x[0] + s[0].x[0]);
                    s[i].x[1] = 0.5 * (s[i].x[1] + s[0].x[1]);
                    s[i].v = f(s[i].x[0], s[i].x[1]);
                }
            }
        }
        order();
    }
    result.x0 = s[0].x[0];
    result.x1 = s[0].x[1];
    result.value = s[0].v;
    return result;
}

struct BranchFit {
    double alpha = 0.0, tau = 0.0, residual = 1e100;
    bool converged = false;
};

BranchFit fit_branch(const std::vector<FitPoint>& pts, IetBranch branch,
                     double mean_dt, double weight_sum) {
    const std::array<double, 3> alpha_starts =
        branch == IetBranch::plus ? std::array<double, 3>{0.3, 0.8, 1.6}
                                  : std::array<double, 3>{0.2, 0.5, 0.8};
    const std::array<double, 3> tau_starts{0.5 * mean_dt, mean_dt,
                                           5.0 * mean_dt};
    auto f = [&](double la, double lt) {
        return objective(pts, branch, std::exp(la), std::exp(lt));
    };
    BranchFit best;
    for (const double a0 : alpha_starts) {
        for (const double t0 : tau_starts) {
            const auto r =
                nelder_mead_2d(f, std::log(a0), std::log(t0), 0.4, 400);
            if (r.value < best.residual) {
                best.residual = r.value;
                best.alpha = std::exp(r.x0);
                best.tau = std::exp(r.x1);
                best.converged = r.converged;
            }
        }
    }
    best.residual = std::sqrt(best.residual / weight_sum);
    return best;
}

}  // namespace

IetFit fit_iet(const IetSample& sample, double bin_ratio) {
    if (sample.intervals.size() < 20)
        throw std::invalid_argument("fit_iet: need at least 20 intervals");
    const Histogram hist = iet_distribution(sample, bin_ratio);

    std::vector<FitPoint> pts;
    double weight_sum = 0.0;
    double mean_dt = 0.0;
    for (int i = 0; i < hist.bins(); ++i) {
        if (hist.counts[i] <= 0) continue;
        const auto w = static_cast<double>(hist.counts[i]);
        pts.push_back({hist.center(i), std::log(hist.density(i)), w});
        weight_sum += w;
        mean_dt += w * hist.center(i);
    }
    if (pts.size() < 3)
        throw std::invalid_argument("fit_iet: too few occupied bins");
    mean_dt /= weight_sum;

    const BranchFit plus = fit_branch(pts, IetBranch::plus, mean_dt, weight_sum);
    const BranchFit minus =
        fit_branch(pts, IetBranch::minus, mean_dt, weight_sum);

    IetFit fit;
    fit.residual_plus = plus.residual;
    fit.residual_minus = minus.residual;
    const BranchFit& winner = plus.residual <= minus.residual ? plus : minus;
    fit.model.branch =
        plus.residual <= minus.residual ? IetBranch::plus : IetBranch::minus;
    fit.model.alpha = winner.alpha;
    fit.model.tau_q = winner.tau;
    fit.residual = winner.residual;
    fit.converged = winner.converged;
    return fit;
}

}  // namespace spinmarket
