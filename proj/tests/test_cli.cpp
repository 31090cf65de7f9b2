/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "spinmarket/csv.hpp"

namespace fs = std::filesystem;

namespace {

const char* kSimConfig = R"(
model.lambda = 1.0
model.n = 8
model.T = 400
model.seed = 11
noise.family = wm
noise.K = 5
noise.b = 2
noise.b0 = 0.2
stats.tau = 1,2
stats.max_lag = 50
stats.rq = 1,2
)";

const char* kSweepConfig = R"(
sweep.lambda = 0.5:1:1.5
sweep.K = 4:2:6
sweep.b = 2:1:3
sweep.b0 = 0.2:0.2:0.4
sweep.T = 25
sweep.replicas = 1
sweep.base_seed = 5
sweep.n = 8
sweep.workers = 2
)";

struct Workspace {
    fs::path root;
    explicit Workspace(const std::string& name) {
        root = fs::temp_directory_path() / ("spinmarket_cli_" + name);
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~Workspace() { fs::remove_all(root); }

    fs::path write(const std::string& name, const std::string& contents) const {
        const fs::path path = root / name;
        std::ofstream out(path);
        out << contents;
        return path;
    }
};

int run_cli(const std::string& args, const fs::path& log) {
    const std::string command = std::string(SPINMARKET_CLI_PATH) + " " + args +
                                " >" + log.string() + " 2>&1";
    const int rc = std::system(command.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) ++count;
    return count;
}

}  // namespace

TEST_CASE("simulate writes deterministic magnetization and returns files") {
    Workspace ws("simulate");
    const fs::path config = ws.write("run.cfg", kSimConfig);
    const fs::path out_a = ws.root / "a";
    const fs::path out_b = ws.root / "b";
    const fs::path log = ws.root / "log.txt";

    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                        out_a.string(),
                    log) == 0);
    CHECK(line_count(out_a / "magnetization.csv") == 401);  // header + T rows
    CHECK(fs::exists(out_a / "returns_tau1.csv"));
    CHECK(fs::exists(out_a / "returns_tau2.csv"));
    CHECK(fs::exists(out_a / "run_manifest.txt"));

    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                        out_b.string(),
                    log) == 0);
    CHECK(slurp(out_a / "magnetization.csv") == slurp(out_b / "magnetization.csv"));
    CHECK(slurp(out_a / "returns_tau1.csv") == slurp(out_b / "returns_tau1.csv"));
    CHECK(slurp(out_a / "run_manifest.txt") == slurp(out_b / "run_manifest.txt"));

    // A different seed produces different data.
    const fs::path out_c = ws.root / "c";
    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                        out_c.string() + " --seed 999",
                    log) == 0);
    CHECK(slurp(out_a / "magnetization.csv") != slurp(out_c / "magnetization.csv"));
}

TEST_CASE("a one-round horizon yields exactly one data row") {
    Workspace ws("tiny");
    const fs::path config = ws.write("tiny.cfg",
                                     "model.lambda = 1\nmodel.n = 4\nmodel.T = 1\n"
                                     "noise.family = wm\nnoise.K = 5\nnoise.b = 2\n"
                                     "noise.b0 = 0.2\n");
    const fs::path out = ws.root / "out";
    const fs::path log = ws.root / "log.txt";
    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                        out.string(),
                    log) == 0);
    CHECK(line_count(out / "magnetization.csv") == 2);  // header + one row
    CHECK_FALSE(fs::exists(out / "returns_tau1.csv"));  // needs tau < T
}

TEST_CASE("invalid configs fail with a diagnostic naming the key") {
    Workspace ws("badconfig");
    const fs::path config = ws.write("bad.cfg", "model.bogus = 1\n");
    const fs::path log = ws.root / "log.txt";
    CHECK(run_cli("simulate --config " + config.string() + " --out " +
                      (ws.root / "out").string(),
                  log) != 0);
    CHECK(slurp(log).find("model.bogus") != std::string::npos);

    const fs::path missing = ws.write("missing.cfg", "model.T = 10\n");
    CHECK(run_cli("simulate --config " + missing.string() + " --out " +
                      (ws.root / "out2").string(),
                  log) != 0);
    CHECK(slurp(log).find("model.lambda") != std::string::npos);
}

TEST_CASE("stats and iet run on simulated returns") {
    Workspace ws("stats");
    const fs::path config = ws.write("run.cfg", kSimConfig);
    const fs::path out = ws.root / "out";
    const fs::path log = ws.root / "log.txt";
    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                        out.string(),
                    log) == 0);

    const fs::path stats_out = ws.root / "stats";
    REQUIRE(run_cli("stats --config " + config.string() + " --out " +
                        stats_out.string() + " " +
                        (out / "returns_tau1.csv").string(),
                    log) == 0);
    for (const char* name : {"histogram.csv", "ccdf.csv", "acf_raw.csv",
                             "acf_abs.csv", "fit_report.csv"})
        CHECK(fs::exists(stats_out / name));
    CHECK(line_count(stats_out / "acf_raw.csv") == 52);  // header + lags 0..50

    const fs::path iet_out = ws.root / "iet";
    REQUIRE(run_cli("iet --config " + config.string() + " --out " +
                        iet_out.string() + " " +
                        (out / "returns_tau1.csv").string(),
                    log) == 0);
    CHECK(fs::exists(iet_out / "iet_report.csv"));

    // Byte-identical on rerun.
    const fs::path stats_out2 = ws.root / "stats2";
    REQUIRE(run_cli("stats --config " + config.string() + " --out " +
                        stats_out2.string() + " " +
                        (out / "returns_tau1.csv").string(),
                    log) == 0);
    CHECK(slurp(stats_out / "fit_report.csv") ==
          slurp(stats_out2 / "fit_report.csv"));
    CHECK(slurp(stats_out / "acf_abs.csv") == slurp(stats_out2 / "acf_abs.csv"));
}

TEST_CASE("stats rejects an empty returns file") {
    Workspace ws("empty");
    const fs::path config = ws.write("run.cfg", kSimConfig);
    const fs::path empty = ws.write("empty.csv", "t,r\n");
    const fs::path log = ws.root / "log.txt";
    CHECK(run_cli("stats --config " + config.string() + " --out " +
                      (ws.root / "out").string() + " " + empty.string(),
                  log) != 0);
}

TEST_CASE("sweep produces records, slices, and supports resume") {
    Workspace ws("sweep");
    const fs::path config = ws.write("sweep.cfg", kSweepConfig);
    const fs::path out = ws.root / "out";
    const fs::path log = ws.root / "log.txt";
    REQUIRE(run_cli("sweep --config " + config.string() + " --out " +
                        out.string(),
                    log) == 0);
    // 2 lambda x 2 K x 2 b x 2 b0 = 16 records + header.
    CHECK(line_count(out / "sweep.csv") == 17);
    CHECK(fs::exists(out / "sweep_manifest.txt"));
    CHECK(fs::exists(out / "slice_K4_lambda0.5.csv"));
    CHECK(fs::exists(out / "slice_K6_lambda1.5.csv"));
    const std::string full_csv = slurp(out / "sweep.csv");

    // Truncate outputs to simulate an interrupted sweep, then resume.
    {
        std::vector<std::string> csv_lines, manifest_lines;
        {
            std::ifstream in(out / "sweep.csv");
            std::string line;
            while (std::getline(in, line)) csv_lines.push_back(line);
        }
        {
            std::ifstream in(out / "sweep_manifest.txt");
            std::string line;
            while (std::getline(in, line)) manifest_lines.push_back(line);
        }
        std::size_t spec_lines = 0;
        while (spec_lines < manifest_lines.size() &&
               manifest_lines[spec_lines].rfind("done = ", 0) != 0)
            ++spec_lines;
        std::ofstream csv(out / "sweep.csv", std::ios::trunc);
        for (std::size_t i = 0; i < 9; ++i) csv << csv_lines[i] << '\n';
        std::ofstream manifest(out / "sweep_manifest.txt", std::ios::trunc);
        // All spec lines + the first 8 done lines, matching the 8 records.
        for (std::size_t i = 0; i < spec_lines + 8; ++i)
            manifest << manifest_lines[i] << '\n';
    }
    REQUIRE(run_cli("sweep --config " + config.string() + " --out " +
                        out.string(),
                    log) == 0);
    CHECK(line_count(out / "sweep.csv") == 17);

    // A mismatched grid refuses to resume without --fresh.
    std::string changed(kSweepConfig);
    const auto pos = changed.find("sweep.T = 25");
    changed.replace(pos, 12, "sweep.T = 30");
    const fs::path changed_cfg = ws.write("changed.cfg", changed);
    CHECK(run_cli("sweep --config " + changed_cfg.string() + " --out " +
                      out.string(),
                  log) != 0);
    CHECK(slurp(log).find("--fresh") != std::string::npos);
    REQUIRE(run_cli("sweep --config " + changed_cfg.string() + " --out " +
                        out.string() + " --fresh",
                    log) == 0);
    CHECK(line_count(out / "sweep.csv") == 17);

    // A corrupt manifest also demands --fresh.
    {
        std::ofstream manifest(out / "sweep_manifest.txt", std::ios::app);
        manifest << "done = not-a-number\n";
    }
    CHECK(run_cli("sweep --config " + changed_cfg.string() + " --out " +
                      out.string(),
                  log) != 0);
    CHECK(slurp(log).find("--fresh") != std::string::npos);
    (void)full_csv;
}
