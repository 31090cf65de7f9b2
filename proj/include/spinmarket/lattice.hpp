/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spinmarket/noise.hpp"
#include "spinmarket/rng.hpp"

namespace spinmarket {

using Spin = std::int8_t;

/// Which magnetization enters the update threshold q = lambda * |M|:
/// the running value maintained draw-by-draw, or the value frozen at the
/// end of the previous round.
enum class ThresholdMag { running, previous_round };

struct RestartPolicy {
    bool enabled = true;
    // When false, returns whose window overlaps a restart are dropped from
    // derived return series.
    bool include_restart_return = false;
};

/// Full simulation configuration.
struct ModelParams {
    double J = 1.0;        // nearest-neighbor coupling, > 0
    double lambda = 0.0;   // threshold coefficient, >= 0
    int n = 32;            // lattice side, N = n * n
    NoiseSpec noise = WmParams{};
    std::int64_t T = 1;    // horizon in rounds
    std::uint64_t seed = 1;
    double market_depth = 0.0;  // Lambda; 0 means "default to N"
    RestartPolicy restart;
    ThresholdMag threshold_mag = ThresholdMag::running;

    int N() const { return n * n; }
    double depth() const { return market_depth > 0.0 ? market_depth : N(); }
    void validate() const;
};

/// n x n grid of three-state spins with periodic boundary and an
/// incrementally maintained spin sum.
class SpinLattice {
public:
    explicit SpinLattice(int n);

    /// Uniform {-1, 0, +1} per site, drawn in site order 0..N-1.
    static SpinLattice random(int n, Rng& rng);

    int n() const { return n_; }
    int size() const { return static_cast<int>(spins_.size()); }
    std::span<const Spin> spins() const { return spins_; }
    Spin spin(int i) const { return spins_[static_cast<std::size_t>(i)]; }
    std::int64_t magnet_sum() const { return magnet_sum_; }
    double magnetization() const {
        return static_cast<double>(magnet_sum_) / size();
    }
    std::int64_t round_index() const { return round_index_; }

    void set_spin(int i, Spin value);
    void advance_round() { ++round_index_; }

    /// Four nearest neighbors of site i (periodic), as flat indices.
    const int* neighbors(int i) const { return &neighbors_[4 * i]; }

    /// Spin sum recomputed from scratch; must equal magnet_sum().
    std::int64_t recompute_magnet_sum() const;

private:
    int n_;
    std::vector<Spin> spins_;
    std::vector<int> neighbors_;
    std::int64_t magnet_sum_ = 0;
    std::int64_t round_index_ = 0;
};

struct RoundRecord {
    std::int64_t t = 0;      // round index, 1-based
    double m = 0.0;          // magnetization after the round (and restart)
    bool restarted = false;
    int flips = 0;           // spin-value changes among the N draws
};

/// Output of one simulation. Immutable once produced.
struct TimeSeries {
    ModelParams params;
    double m0 = 0.0;  // magnetization of the initial random configuration
    std::vector<RoundRecord> rounds;

    std::int64_t restart_count() const;
};

/// Three-branch threshold sign: +1 if x >= q, 0 if -q <= x < q, -1 if x < -q.
inline int threshold_sign(double x, double q) {
    if (x >= q) return +1;
    if (x < -q) return -1;
    return 0;
}

/// J * (sum of the four neighbor spins) + eps.
double local_field(const SpinLattice& lattice, int i, const ModelParams& params,
                   double eps);

/// Updates site i from its local field against q = lambda * |M|, with M the
/// running magnetization before this update. Returns the new spin. The spin
/// sum is adjusted immediately, so subsequent draws see the new value.
int update_spin(SpinLattice& lattice, int i, const ModelParams& params,
                double eps);

/// One round driven by an arbitrary draw source: `draw` is called N times and
/// must return {site index, noise value}. Restart policy applies afterward
/// when `rng` is non-null. Exposed so tests can replay or transform streams.
template <class DrawFn>
RoundRecord run_round_draws(SpinLattice& lattice, const ModelParams& params,
                            DrawFn&& draw, Rng* rng);

/// One round: N site draws (uniform with replacement), each with a fresh
/// noise sample, then the restart check. Site index is drawn before the
/// noise value within each step.
RoundRecord run_round(SpinLattice& lattice, const ModelParams& params,
                      Rng& rng);

/// If the lattice is fully ordered (|M| = 1), redraw every spin uniformly
/// from {-1, 0, +1} in site order and return true; otherwise do nothing.
bool restart_if_trapped(SpinLattice& lattice, Rng& rng);

/// Random initial configuration from params.seed, then T rounds.
TimeSeries simulate(const ModelParams& params);

// -- implementation ---------------------------------------------------------

namespace detail {
// Single-site update against a precomputed threshold. Shared by the round
// kernel and the public update_spin so both paths apply identical dynamics.
inline int apply_update(SpinLattice& lattice, int i, double coupling, double q,
                        double eps) {
    const int* nb = lattice.neighbors(i);
    const auto spins = lattice.spins();
    const int neighbor_sum = spins[nb[0]] + spins[nb[1]] + spins[nb[2]] +
                             spins[nb[3]];
    const double field = coupling * neighbor_sum + eps;
    const int next = threshold_sign(field, q);
    if (next != spins[i]) lattice.set_spin(i, static_cast<Spin>(next));
    return next;
}
}  // namespace detail

template <class DrawFn>
RoundRecord run_round_draws(SpinLattice& lattice, const ModelParams& params,
                            DrawFn&& draw, Rng* rng) {
    const int N = lattice.size();
    const bool running = params.threshold_mag == ThresholdMag::running;
    const double lambda_over_n = params.lambda / N;
    const double q_frozen = params.lambda * std::abs(lattice.magnetization());
    int flips = 0;
    for (int k = 0; k < N; ++k) {
        const auto [site, eps] = draw();
        const double q =
            running ? lambda_over_n *
                          std::abs(static_cast<double>(lattice.magnet_sum()))
                    : q_frozen;
        const int before = lattice.spin(site);
        const int after = detail::apply_update(lattice, site, params.J, q, eps);
        flips += (after != before);
    }
    lattice.advance_round();
    RoundRecord rec;
    rec.t = lattice.round_index();
    rec.flips = flips;
    rec.restarted =
        (params.restart.enabled && rng) ? restart_if_trapped(lattice, *rng)
                                        : false;
    rec.m = lattice.magnetization();
    return rec;
}

}  // namespace spinmarket
