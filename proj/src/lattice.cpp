/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/lattice.hpp"

#include <cassert>
#include <stdexcept>

namespace spinmarket {

void ModelParams::validate() const {
    if (n < 2) throw std::invalid_argument("model: n must be >= 2");
    if (T < 1) throw std::invalid_argument("model: T must be >= 1");
    if (!(J > 0.0)) throw std::invalid_argument("model: J must be > 0");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("model: lambda must be >= 0");
    if (market_depth != 0.0 && !(market_depth > 0.0))
        throw std::invalid_argument("model: market_depth must be > 0");
    spinmarket::validate(noise);
}

SpinLattice::SpinLattice(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("lattice: n must be >= 2");
    const int N = n * n;
    spins_.assign(static_cast<std::size_t>(N), 0);
    neighbors_.resize(static_cast<std::size_t>(4 * N));
    for (int i = 0; i < N; ++i) {
        const int row = i / n;
        const int col = i % n;
        const int up = (row == 0 ? n - 1 : row - 1) * n + col;
        const int down = (row == n - 1 ? 0 : row + 1) * n + col;
        const int left = row * n + (col == 0 ? n - 1 : col - 1);
        const int right = row * n + (col == n - 1 ? 0 : col + 1);
        neighbors_[4 * i + 0] = up;
        neighbors_[4 * i + 1] = down;
        neighbors_[4 * i + 2] = left;
        neighbors_[4 * i + 3] = right;
    }
}

SpinLattice SpinLattice::random(int n, Rng& rng) {
    SpinLattice lattice(n);
    std::int64_t sum = 0;
    for (auto& s : lattice.spins_) {
        s = static_cast<Spin>(static_cast<int>(rng.below(3)) - 1);
        sum += s;
    }
    lattice.magnet_sum_ = sum;
    return lattice;
}

void SpinLattice::set_spin(int i, Spin value) {
    assert(value >= -1 && value <= 1);
    auto& slot = spins_[static_cast<std::size_t>(i)];
    magnet_sum_ += value - slot;
    slot = value;
}

std::int64_t SpinLattice::recompute_magnet_sum() const {
    std::int64_t sum = 0;
    for (const Spin s : spins_) sum += s;
    return sum;
}

std::int64_t TimeSeries::restart_count() const {
    std::int64_t count = 0;
    for (const auto& rec : rounds) count += rec.restarted;
    return count;
}

double local_field(const SpinLattice& lattice, int i, const ModelParams& params,
                   double eps) {
    const int* nb = lattice.neighbors(i);
    const auto spins = lattice.spins();
    const int neighbor_sum =
        spins[nb[0]] + spins[nb[1]] + spins[nb[2]] + spins[nb[3]];
    return params.J * neighbor_sum + eps;
}

int update_spin(SpinLattice& lattice, int i, const ModelParams& params,
                double eps) {
    const double q = params.lambda * std::abs(lattice.magnetization());
    return detail::apply_update(lattice, i, params.J, q, eps);
}

RoundRecord run_round(SpinLattice& lattice, const ModelParams& params,
                      Rng& rng) {
    const NoiseSampler sampler(params.noise);
    const int N = lattice.size();
    auto draw = [&]() -> std::pair<int, double> {
        const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(N)));
        return {site, sampler(rng)};
    };
    return run_round_draws(lattice, params, draw, &rng);
}

bool restart_if_trapped(SpinLattice& lattice, Rng& rng) {
    const auto N = static_cast<std::int64_t>(lattice.size());
    if (lattice.magnet_sum() != N && lattice.magnet_sum() != -N) return false;
    for (int i = 0; i < lattice.size(); ++i)
        lattice.set_spin(i, static_cast<Spin>(static_cast<int>(rng.below(3)) - 1));
    return true;
}

TimeSeries simulate(const ModelParams& params) {
    params.validate();
    Rng rng(params.seed);
    SpinLattice lattice = SpinLattice::random(params.n, rng);
    const NoiseSampler sampler(params.noise);
    const int N = lattice.size();

    TimeSeries ts;
    ts.params = params;
    ts.m0 = lattice.magnetization();
    ts.rounds.reserve(static_cast<std::size_t>(params.T));

    auto draw = [&]() -> std::pair<int, double> {
        const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(N)));
        return {site, sampler(rng)};
    };
    for (std::int64_t t = 0; t < params.T; ++t) {
        ts.rounds.push_back(run_round_draws(lattice, params, draw, &rng));
#ifndef NDEBUG
        assert(lattice.recompute_magnet_sum() == lattice.magnet_sum());
#endif
    }
    if (lattice.recompute_magnet_sum() != lattice.magnet_sum())
        throw std::logic_error("lattice: spin-sum bookkeeping diverged");
    return ts;
}

}  // namespace spinmarket
