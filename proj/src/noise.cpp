/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spinmarket {

void WmParams::validate() const {
    if (!(K > 1.0)) throw std::invalid_argument("noise: K must be > 1");
    if (!(b > 1.0)) throw std::invalid_argument("noise: b must be > 1");
    if (!(b0 > 0.0)) throw std::invalid_argument("noise: b0 must be > 0");
}

void GaussianContinuous::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("noise: sigma must be > 0");
}

void GaussianDiscrete::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("noise: sigma must be > 0");
    if (!(step > 0.0)) throw std::invalid_argument("noise: step must be > 0");
}

void ParetoContinuous::validate() const {
    if (!(exponent > 0.0))
        throw std::invalid_argument("noise: exponent must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("noise: scale must be > 0");
}

void validate(const NoiseSpec& spec) {
    std::visit([](const auto& p) { p.validate(); }, spec);
}

double wm_pmf(const WmParams& params, int j, int sign) {
    params.validate();
    if (j < 0) throw std::invalid_argument("wm_pmf: j must be >= 0");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("wm_pmf: sign must be +1 or -1");
    return (1.0 - 1.0 / params.K) * std::pow(params.K, -j) * 0.5;
}

double wm_variance(const WmParams& params) {
    params.validate();
    const double ratio = params.b * params.b / params.K;
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return params.b0 * params.b0 * (1.0 - 1.0 / params.K) / (1.0 - ratio);
}

double wm_tail_exponent(const WmParams& params) {
    params.validate();
    return std::log(params.K) / std::log(params.b);
}

NoiseSampler::NoiseSampler(const NoiseSpec& spec) {
    spinmarket::validate(spec);
    if (const auto* wm = std::get_if<WmParams>(&spec)) {
        family_ = Family::wm;
        inv_log_inv_k_ = 1.0 / std::log(1.0 / wm->K);
        b_ = wm->b;
        b0_ = wm->b0;
        // Spike magnitudes up to the largest index a 53-bit uniform can
        // select for this K; anything beyond falls back to pow().
        const int max_j =
            static_cast<int>(53.0 * std::numbers::ln2 / std::log(wm->K)) + 2;
        spikes_.reserve(static_cast<std::size_t>(std::min(max_j, 64)));
        for (int j = 0; j < std::min(max_j, 64); ++j)
            spikes_.push_back(wm->b0 * std::pow(wm->b, j));
    } else if (const auto* g = std::get_if<GaussianContinuous>(&spec)) {
        family_ = Family::gaussian;
        sigma_ = g->sigma;
    } else if (const auto* dg = std::get_if<GaussianDiscrete>(&spec)) {
        family_ = Family::gaussian_discrete;
        sigma_ = dg->sigma;
        step_ = dg->step;
    } else {
        const auto& p = std::get<ParetoContinuous>(spec);
        family_ = Family::pareto;
        neg_inv_exponent_ = -1.0 / p.exponent;
        scale_ = p.scale;
    }
}

double NoiseSampler::wm_magnitude(int j) const {
    if (j < static_cast<int>(spikes_.size())) return spikes_[j];
    return b0_ * std::pow(b_, j);
}

double NoiseSampler::operator()(Rng& rng) const {
    switch (family_) {
        case Family::wm: {
            // Inverse CDF of the geometric spike index: u in (0,1] lands in
            // (K^-(j+1), K^-j] exactly when floor(ln u / ln(1/K)) == j, which
            // has mass (1 - 1/K) K^-j. Closed form, no support truncation.
            const double u = rng.unit_pos();
            const int j = static_cast<int>(std::floor(std::log(u) * inv_log_inv_k_));
            return static_cast<double>(rng.sign()) * wm_magnitude(j);
        }
        case Family::gaussian:
        case Family::gaussian_discrete: {
            const double u1 = rng.unit_pos();
            const double u2 = rng.unit();
            const double z = std::sqrt(-2.0 * std::log(u1)) *
                             std::cos(2.0 * std::numbers::pi * u2);
            const double g = sigma_ * z;
            if (family_ == Family::gaussian) return g;
            return step_ * std::round(g / step_);
        }
        case Family::pareto: {
            const double u = rng.unit_pos();
            const double magnitude = scale_ * std::pow(u, neg_inv_exponent_);
            return static_cast<double>(rng.sign()) * magnitude;
        }
    }
    return 0.0;  // unreachable
}

double sample(const NoiseSpec& spec, Rng& rng) {
    return NoiseSampler(spec)(rng);
}

}  // namespace spinmarket
