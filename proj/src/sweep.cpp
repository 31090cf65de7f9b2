/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include "spinmarket/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace spinmarket {

void AxisSpec::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("sweep: axis step must be > 0");
    if (stop < start) throw std::invalid_argument("sweep: axis stop < start");
}

int AxisSpec::count() const {
    validate();
    // Tolerant endpoint so stop itself is included despite rounding.
    return static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
}

void SweepGrid::validate() const {
    lambda_axis.validate();
    K_axis.validate();
    b_axis.validate();
    b0_axis.validate();
    if (T < 1) throw std::invalid_argument("sweep: T must be >= 1");
    if (replicas < 1) throw std::invalid_argument("sweep: replicas must be >= 1");
    if (n < 2) throw std::invalid_argument("sweep: n must be >= 2");
    if (K_axis.start <= 1.0)
        throw std::invalid_argument("sweep: K axis must stay > 1");
    if (b_axis.start <= 1.0)
        throw std::invalid_argument("sweep: b axis must stay > 1");
    if (b0_axis.start <= 0.0)
        throw std::invalid_argument("sweep: b0 axis must stay > 0");
}

std::int64_t SweepGrid::points() const {
    return static_cast<std::int64_t>(lambda_axis.count()) * K_axis.count() *
           b_axis.count() * b0_axis.count();
}

void SweepGrid::coords(std::int64_t point, int& il, int& ik, int& ib,
                       int& ib0) const {
    const int nb0 = b0_axis.count();
    const int nb = b_axis.count();
    const int nk = K_axis.count();
    ib0 = static_cast<int>(point % nb0);
    point /= nb0;
    ib = static_cast<int>(point % nb);
    point /= nb;
    ik = static_cast<int>(point % nk);
    point /= nk;
    il = static_cast<int>(point);
}

ModelParams SweepGrid::params_at(std::int64_t point, int replica) const {
    int il, ik, ib, ib0;
    coords(point, il, ik, ib, ib0);
    ModelParams params;
    params.J = 1.0;
    params.lambda = lambda_axis.at(il);
    params.n = n;
    params.noise = WmParams{K_axis.at(ik), b_axis.at(ib), b0_axis.at(ib0)};
    params.T = T;
    params.restart.enabled = restart_enabled;
    params.seed = mix_seed(base_seed, static_cast<std::uint64_t>(point),
                           static_cast<std::uint64_t>(replica));
    return params;
}

void run_sweep(const SweepGrid& grid, int worker_budget, const SweepSink& sink,
               const std::set<std::pair<std::int64_t, int>>* skip) {
    grid.validate();
    if (worker_budget < 1)
        throw std::invalid_argument("sweep: worker budget must be >= 1");

    struct Task {
        std::int64_t point;
        int replica;
    };
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(grid.tasks()));
    for (std::int64_t p = 0; p < grid.points(); ++p)
        for (int r = 0; r < grid.replicas; ++r)
            if (!skip || !skip->count({p, r})) tasks.push_back({p, r});
    if (tasks.empty()) return;

    std::atomic<std::size_t> next_task{0};
    std::mutex sink_mutex;
    std::map<std::size_t, SweepRecord> pending;
    std::size_t next_flush = 0;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t idx = next_task.fetch_add(1);
            if (idx >= tasks.size()) return;
            {
                std::scoped_lock lock(failure_mutex);
                if (failure) return;
            }
            const Task task = tasks[idx];
            try {
                const ModelParams params = grid.params_at(task.point, task.replica);
                const auto t0 = std::chrono::steady_clock::now();
                const TimeSeries ts = simulate(params);
                const auto t1 = std::chrono::steady_clock::now();

                SweepRecord rec;
                rec.lambda = params.lambda;
                const auto& wm = std::get<WmParams>(params.noise);
                rec.K = wm.K;
                rec.b = wm.b;
                rec.b0 = wm.b0;
                rec.replica = task.replica;
                rec.seed = params.seed;
                rec.m_final = ts.rounds.back().m;
                rec.restarts = ts.restart_count();
                rec.wall_ms =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
                rec.point = task.point;

                // Flush in task order so the sink sees a deterministic stream.
                std::scoped_lock lock(sink_mutex);
                pending.emplace(idx, std::move(rec));
                while (!pending.empty() && pending.begin()->first == next_flush) {
                    sink(pending.begin()->second);
                    pending.erase(pending.begin());
                    ++next_flush;
                }
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int threads =
        static_cast<int>(std::min<std::size_t>(tasks.size(),
                                               static_cast<std::size_t>(worker_budget)));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

SliceMatrix slice(std::span<const SweepRecord> records, const SweepGrid& grid,
                  double K, double lambda) {
    grid.validate();
    const int nb = grid.b_axis.count();
    const int nb0 = grid.b0_axis.count();
    SliceMatrix m;
    m.b_values.reserve(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) m.b_values.push_back(grid.b_axis.at(i));
    m.b0_values.reserve(static_cast<std::size_t>(nb0));
    for (int i = 0; i < nb0; ++i) m.b0_values.push_back(grid.b0_axis.at(i));
    m.mean_abs_m.assign(static_cast<std::size_t>(nb0),
                        std::vector<double>(static_cast<std::size_t>(nb), 0.0));

    std::vector<std::vector<int>> hits(
        static_cast<std::size_t>(nb0), std::vector<int>(static_cast<std::size_t>(nb), 0));
    const double tol = 1e-9;
    auto index_of = [tol](const AxisSpec& axis, double v) {
        const double pos = (v - axis.start) / axis.step;
        const int i = static_cast<int>(std::lround(pos));
        if (i < 0 || i >= axis.count() || std::abs(pos - i) > tol * 10 + 1e-6)
            return -1;
        return i;
    };

    for (const auto& rec : records) {
        if (std::abs(rec.K - K) > 1e-9 || std::abs(rec.lambda - lambda) > 1e-9)
            continue;
        const int ib = index_of(grid.b_axis, rec.b);
        const int ib0 = index_of(grid.b0_axis, rec.b0);
        if (ib < 0 || ib0 < 0) continue;
        m.mean_abs_m[static_cast<std::size_t>(ib0)][static_cast<std::size_t>(ib)] +=
            std::abs(rec.m_final);
        ++hits[static_cast<std::size_t>(ib0)][static_cast<std::size_t>(ib)];
    }
    for (int i = 0; i < nb0; ++i) {
        for (int j = 0; j < nb; ++j) {
            auto& cell = m.mean_abs_m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const int h = hits[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (h == 0) {
                cell = std::numeric_limits<double>::quiet_NaN();
                ++m.missing;
            } else {
                cell /= h;
            }
        }
    }
    return m;
}

}  // namespace spinmarket
