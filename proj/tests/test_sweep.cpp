/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "spinmarket/sweep.hpp"

using namespace spinmarket;

namespace {

SweepGrid small_grid() {
    SweepGrid grid;
    grid.lambda_axis = {0.5, 1.5, 1.0};
    grid.K_axis = {4.0, 6.0, 2.0};
    grid.b_axis = {2.0, 3.0, 1.0};
    grid.b0_axis = {0.2, 0.4, 0.2};
    grid.T = 30;
    grid.replicas = 1;
    grid.base_seed = 77;
    grid.n = 8;
    return grid;
}

}  // namespace

TEST_CASE("axis counts include both endpoints") {
    CHECK(AxisSpec{0.1, 3.9, 0.2}.count() == 20);
    CHECK(AxisSpec{1.5, 9.5, 0.5}.count() == 17);
    CHECK(AxisSpec{1.2, 4.8, 0.2}.count() == 19);
    CHECK(AxisSpec{0.1, 1.9, 0.1}.count() == 19);
    CHECK(AxisSpec{2.0, 2.0, 1.0}.count() == 1);
    CHECK_THROWS_AS((AxisSpec{1.0, 2.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((AxisSpec{2.0, 1.0, 0.5}.validate()), std::invalid_argument);
}

TEST_CASE("a 2x2x2x2 grid runs exactly 16 simulations") {
    const SweepGrid grid = small_grid();
    CHECK(grid.points() == 16);
    std::vector<SweepRecord> records;
    run_sweep(grid, 2, [&](const SweepRecord& rec) { records.push_back(rec); });
    CHECK(records.size() == 16);
    for (const auto& rec : records) {
        CHECK(std::abs(rec.m_final) <= 1.0);
        CHECK(rec.restarts >= 0);
    }
}

TEST_CASE("record streams are identical for 1 and 4 workers") {
    const SweepGrid grid = small_grid();
    std::vector<SweepRecord> serial, parallel;
    run_sweep(grid, 1, [&](const SweepRecord& rec) { serial.push_back(rec); });
    run_sweep(grid, 4, [&](const SweepRecord& rec) { parallel.push_back(rec); });
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].point == parallel[i].point);
        CHECK(serial[i].replica == parallel[i].replica);
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].m_final == parallel[i].m_final);  // bitwise
        CHECK(serial[i].restarts == parallel[i].restarts);
    }
}

TEST_CASE("per-point seeds are pure functions of base seed, point, replica") {
    SweepGrid grid = small_grid();
    grid.replicas = 2;
    std::vector<SweepRecord> records;
    run_sweep(grid, 2, [&](const SweepRecord& rec) { records.push_back(rec); });
    CHECK(records.size() == 32);
    for (const auto& rec : records)
        CHECK(rec.seed == mix_seed(grid.base_seed,
                                   static_cast<std::uint64_t>(rec.point),
                                   static_cast<std::uint64_t>(rec.replica)));
    // Task order: replica-minor within each point.
    CHECK(records[0].point == 0);
    CHECK(records[0].replica == 0);
    CHECK(records[1].point == 0);
    CHECK(records[1].replica == 1);
}

TEST_CASE("skip set suppresses completed tasks") {
    const SweepGrid grid = small_grid();
    std::set<std::pair<std::int64_t, int>> done = {{0, 0}, {5, 0}, {15, 0}};
    std::vector<SweepRecord> records;
    run_sweep(grid, 2, [&](const SweepRecord& rec) { records.push_back(rec); },
              &done);
    CHECK(records.size() == 13);
    for (const auto& rec : records)
        CHECK(done.count({rec.point, rec.replica}) == 0);
}

TEST_CASE("grid coordinates invert the flat index") {
    const SweepGrid grid = small_grid();
    int il, ik, ib, ib0;
    grid.coords(0, il, ik, ib, ib0);
    CHECK((il == 0 && ik == 0 && ib == 0 && ib0 == 0));
    grid.coords(grid.points() - 1, il, ik, ib, ib0);
    CHECK((il == 1 && ik == 1 && ib == 1 && ib0 == 1));
    const ModelParams params = grid.params_at(3, 0);
    // Point 3 = b0 index 1, b index 1, K index 0, lambda index 0.
    const auto& wm = std::get<WmParams>(params.noise);
    CHECK(wm.b0 == doctest::Approx(0.4));
    CHECK(wm.b == doctest::Approx(3.0));
    CHECK(wm.K == doctest::Approx(4.0));
    CHECK(params.lambda == doctest::Approx(0.5));
    CHECK(params.J == 1.0);
}

TEST_CASE("slice averages |M_T| over replicas in grid order") {
    SweepGrid grid = small_grid();
    grid.replicas = 2;
    std::vector<SweepRecord> records;
    // Synthetic records: +0.8 and -0.8 at every grid point.
    for (std::int64_t p = 0; p < grid.points(); ++p) {
        for (int r = 0; r < 2; ++r) {
            SweepRecord rec;
            int il, ik, ib, ib0;
            grid.coords(p, il, ik, ib, ib0);
            rec.lambda = grid.lambda_axis.at(il);
            rec.K = grid.K_axis.at(ik);
            rec.b = grid.b_axis.at(ib);
            rec.b0 = grid.b0_axis.at(ib0);
            rec.replica = r;
            rec.m_final = r == 0 ? 0.8 : -0.8;
            rec.point = p;
            records.push_back(rec);
        }
    }
    const SliceMatrix m = slice(records, grid, 4.0, 0.5);
    REQUIRE(m.b_values.size() == 2);
    REQUIRE(m.b0_values.size() == 2);
    CHECK(m.missing == 0);
    for (const auto& row : m.mean_abs_m)
        for (const double v : row) CHECK(v == doctest::Approx(0.8));

    // Removing one point's records leaves a NaN gap, not an interpolation.
    records.erase(records.begin(), records.begin() + 2);
    const SliceMatrix gap = slice(records, grid, 4.0, 0.5);
    CHECK(gap.missing == 1);
    CHECK(std::isnan(gap.mean_abs_m[0][0]));
}

TEST_CASE("signed final magnetizations balance over replicas") {
    SweepGrid grid;
    grid.lambda_axis = {0.3, 0.3, 1.0};
    grid.K_axis = {5.0, 5.0, 1.0};
    grid.b_axis = {2.0, 2.0, 1.0};
    grid.b0_axis = {0.4, 0.4, 1.0};
    grid.T = 300;
    grid.replicas = 24;
    grid.base_seed = 3;
    grid.n = 8;
    std::vector<double> finals;
    run_sweep(grid, 2,
              [&](const SweepRecord& rec) { finals.push_back(rec.m_final); });
    REQUIRE(finals.size() == 24);
    double mean = 0.0;
    for (const double m : finals) mean += m;
    mean /= static_cast<double>(finals.size());
    double var = 0.0;
    for (const double m : finals) var += (m - mean) * (m - mean);
    var /= static_cast<double>(finals.size());
    const double stderr_mean =
        std::sqrt(var / static_cast<double>(finals.size()));
    CHECK(std::abs(mean) < 3.0 * stderr_mean + 1e-12);
}
