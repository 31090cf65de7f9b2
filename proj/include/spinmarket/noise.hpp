/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <variant>
#include <vector>

#include "spinmarket/rng.hpp"

namespace spinmarket {

/// Parameters of the discrete heavy-tailed noise law with spikes at
/// +-b0 * b^j, j = 0, 1, 2, ...  Spike j carries mass (1 - 1/K) K^-j,
/// split evenly between the two signs.
struct WmParams {
    double K = 5.0;   // mass ratio between consecutive spikes, > 1
    double b = 2.0;   // magnitude ratio between consecutive spikes, > 1
    double b0 = 0.2;  // magnitude of the innermost spike, > 0

    void validate() const;
};

struct GaussianContinuous {
    double sigma = 1.0;
    void validate() const;
};

/// Gaussian sample rounded to the nearest multiple of `step`.
struct GaussianDiscrete {
    double sigma = 1.0;
    double step = 0.1;
    void validate() const;
};

/// Symmetric two-sided Pareto: magnitude >= scale with
/// P(|x| > m) = (scale/m)^exponent, fair sign.
struct ParetoContinuous {
    double exponent = 3.0;
    double scale = 0.1;
    void validate() const;
};

using NoiseSpec = std::variant<WmParams, GaussianContinuous, GaussianDiscrete,
                               ParetoContinuous>;

void validate(const NoiseSpec& spec);

/// Mass of the spike at sign * b0 * b^j: (1 - 1/K) K^-j / 2.
double wm_pmf(const WmParams& params, int j, int sign);

/// b0^2 (1 - 1/K) / (1 - b^2/K) when b^2/K < 1, +infinity otherwise.
/// The infinite case is decided by the branch condition, never by
/// floating-point overflow.
double wm_variance(const WmParams& params);

/// Asymptotic tail exponent beta = ln K / ln b. The variance is finite
/// exactly when beta > 2.
double wm_tail_exponent(const WmParams& params);

/// Draws from a NoiseSpec. Owns precomputed spike magnitudes for the
/// heavy-tailed family, so one instance per simulation is cheap to sample.
///
/// Stream consumption per sample is fixed and documented so that runs are
/// reproducible:
///   - WM:       one unit_pos (spike index), one sign bit
///   - Gaussian: two unit draws (Box-Muller, cosine branch)
///   - discrete: as Gaussian, then rounded
///   - Pareto:   one unit_pos (magnitude), one sign bit
class NoiseSampler {
public:
    explicit NoiseSampler(const NoiseSpec& spec);

    double operator()(Rng& rng) const;

private:
    enum class Family { wm, gaussian, gaussian_discrete, pareto };

    Family family_;
    // wm
    double inv_log_inv_k_ = 0.0;  // 1 / ln(1/K)
    double b_ = 0.0;
    double b0_ = 0.0;
    std::vector<double> spikes_;  // b0 * b^j for small j
    // gaussian
    double sigma_ = 0.0;
    double step_ = 0.0;
    // pareto
    double neg_inv_exponent_ = 0.0;
    double scale_ = 0.0;

    double wm_magnitude(int j) const;
};

/// Single draw from `spec`. Convenience wrapper; hot paths should hold a
/// NoiseSampler instead.
double sample(const NoiseSpec& spec, Rng& rng);

}  // namespace spinmarket
