/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include "spinmarket/stats.hpp"

namespace spinmarket {

/// gamma(a, x) = integral_0^x t^(a-1) e^-t dt, a > 0, x >= 0.
/// Power series for x < a + 1, continued fraction otherwise; relative error
/// is well inside 1e-10 over the tested domain.
double lower_incomplete_gamma(double a, double x);

/// Gamma(a, x) = Gamma(a) - gamma(a, x), same accuracy.
double upper_incomplete_gamma(double a, double x);

enum class IetBranch { plus, minus };

/// Parameters of the analytic interevent-time density: a power law with a
/// branch-matched incomplete-gamma correction at small times.
struct IetModel {
    double alpha = 1.0;   // > 0; the minus branch additionally needs < 1
    double tau_q = 1.0;   // > 0, in rounds
    IetBranch branch = IetBranch::plus;

    void validate() const;
};

/// psi(dt) = (1/tau) * alpha * (dt/tau)^-(1 +- alpha) * G(1 +- alpha, dt/tau)
/// with G the lower incomplete gamma on the plus branch and the upper one on
/// the minus branch. Normalized density on (0, inf) for either branch.
double psi_q(const IetModel& model, double dt);

/// Cumulative form of psi_q on (0, dt]; closed form via the same incomplete
/// gamma machinery. Handy for sampling and quadrature-free checks.
double psi_q_cdf(const IetModel& model, double dt);

struct IetFit {
    IetModel model;
    double residual = 0.0;  // weighted RMS of log-density misfit
    bool converged = false;
    double residual_plus = 0.0;
    double residual_minus = 0.0;
};

/// Weighted least squares of log psi against the log-binned empirical
/// density (Poisson-count weights), run separately per branch; the branch
/// with the smaller residual wins. Needs at least 20 intervals.
IetFit fit_iet(const IetSample& sample, double bin_ratio = 1.25);

}  // namespace spinmarket
