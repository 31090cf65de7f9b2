/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cstdint>
#include <random>

namespace spinmarket {

/// Deterministic random stream used by every stochastic component.
///
/// The core generator is std::mt19937_64, whose raw output sequence is fully
/// specified by the standard, so a given seed yields the same draws on every
/// platform. All value mappings (unit interval, bounded integers, sign bits)
/// are implemented here explicitly instead of via std::*_distribution, which
/// are allowed to differ between standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; never zero, so log() of it is finite.
    double unit_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, n). Lemire multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        using u128 = unsigned __int128;
        u128 m = static_cast<u128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t cutoff = (0 - n) % n;
            while (lo < cutoff) {
                m = static_cast<u128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Fair sign: +1 or -1.
    int sign() { return (next_u64() & 1u) ? +1 : -1; }

private:
    std::mt19937_64 engine_;
};

/// One splitmix64 step; used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Pure function of (base, a, b); used for per-point seeds in parameter
/// sweeps so that results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b) {
    std::uint64_t s = base;
    std::uint64_t h = splitmix64(s);
    s ^= a;
    h ^= splitmix64(s);
    s ^= b;
    h ^= splitmix64(s);
    return h;
}

}  // namespace spinmarket
