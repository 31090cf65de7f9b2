/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinmarket/analytic.hpp"
#include "spinmarket/commands.hpp"
#include "spinmarket/sweep.hpp"

namespace py = pybind11;
using namespace spinmarket;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::int64_t> to_array_i64(const std::vector<std::int64_t>& v) {
    return py::array_t<std::int64_t>(static_cast<py::ssize_t>(v.size()),
                                     v.data());
}

NoiseSpec noise_from_kwargs(const std::string& family, const py::kwargs& kw) {
    auto need = [&](const char* key) {
        if (!kw.contains(key))
            throw py::value_error(std::string("noise '") + family +
                                  "' needs parameter '" + key + "'");
        return kw[key].cast<double>();
    };
    if (family == "wm") return WmParams{need("K"), need("b"), need("b0")};
    if (family == "gauss") return GaussianContinuous{need("sigma")};
    if (family == "dgauss") return GaussianDiscrete{need("sigma"), need("step")};
    if (family == "pareto")
        return ParetoContinuous{need("exponent"), need("scale")};
    throw py::value_error("unknown noise family '" + family + "'");
}

EventKind kind_of(const std::string& name) {
    if (name == "loss") return EventKind::loss;
    if (name == "profit") return EventKind::profit;
    throw py::value_error("event kind must be 'loss' or 'profit'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Three-state spin-lattice market simulator";

    py::class_<WmParams>(m, "WmParams")
        .def(py::init<double, double, double>(), py::arg("K"), py::arg("b"),
             py::arg("b0"))
        .def_readonly("K", &WmParams::K)
        .def_readonly("b", &WmParams::b)
        .def_readonly("b0", &WmParams::b0)
        .def("__repr__", [](const WmParams& p) {
            return "WmParams(K=" + std::to_string(p.K) + ", b=" +
                   std::to_string(p.b) + ", b0=" + std::to_string(p.b0) + ")";
        });
    py::class_<GaussianContinuous>(m, "GaussianContinuous")
        .def(py::init<double>(), py::arg("sigma"))
        .def_readonly("sigma", &GaussianContinuous::sigma);
    py::class_<GaussianDiscrete>(m, "GaussianDiscrete")
        .def(py::init<double, double>(), py::arg("sigma"), py::arg("step"))
        .def_readonly("sigma", &GaussianDiscrete::sigma)
        .def_readonly("step", &GaussianDiscrete::step);
    py::class_<ParetoContinuous>(m, "ParetoContinuous")
        .def(py::init<double, double>(), py::arg("exponent"), py::arg("scale"))
        .def_readonly("exponent", &ParetoContinuous::exponent)
        .def_readonly("scale", &ParetoContinuous::scale);

    m.def(
        "noise",
        [](const std::string& family, const py::kwargs& kw) {
            NoiseSpec spec = noise_from_kwargs(family, kw);
            validate(spec);
            return spec;
        },
        py::arg("family"),
        "Build a noise specification: noise('wm', K=5, b=2, b0=0.2), "
        "noise('gauss', sigma=1), noise('dgauss', sigma=1, step=0.1), "
        "noise('pareto', exponent=3, scale=0.1).");

    m.def("wm_pmf",
          [](double K, double b, double b0, int j, int sign) {
              return wm_pmf(WmParams{K, b, b0}, j, sign);
          },
          py::arg("K"), py::arg("b"), py::arg("b0"), py::arg("j"),
          py::arg("sign"));
    m.def("wm_variance", [](double K, double b, double b0) {
        return wm_variance(WmParams{K, b, b0});
    });
    m.def("wm_tail_exponent", [](double K, double b, double b0) {
        return wm_tail_exponent(WmParams{K, b, b0});
    });

    m.def(
        "sample_noise",
        [](const NoiseSpec& spec, std::uint64_t seed, std::size_t count) {
            NoiseSampler sampler(spec);
            Rng rng(seed);
            std::vector<double> out(count);
            for (auto& x : out) x = sampler(rng);
            return to_array(out);
        },
        py::arg("spec"), py::arg("seed"), py::arg("count"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double J, double lambda, int n, const NoiseSpec& spec,
                         std::int64_t T, std::uint64_t seed, double market_depth,
                         bool restart_enabled, bool include_restart_return,
                         const std::string& threshold_magnetization) {
                 ModelParams p;
                 p.J = J;
                 p.lambda = lambda;
                 p.n = n;
                 p.noise = spec;
                 p.T = T;
                 p.seed = seed;
                 p.market_depth = market_depth;
                 p.restart.enabled = restart_enabled;
                 p.restart.include_restart_return = include_restart_return;
                 if (threshold_magnetization == "running")
                     p.threshold_mag = ThresholdMag::running;
                 else if (threshold_magnetization == "previous_round")
                     p.threshold_mag = ThresholdMag::previous_round;
                 else
                     throw py::value_error(
                         "threshold_magnetization must be 'running' or "
                         "'previous_round'");
                 p.validate();
                 return p;
             }),
             py::arg("J") = 1.0, py::arg("lambda_") = 1.0, py::arg("n") = 32,
             py::arg("noise") = WmParams{}, py::arg("T") = 1000,
             py::arg("seed") = 1, py::arg("market_depth") = 0.0,
             py::arg("restart_enabled") = true,
             py::arg("include_restart_return") = false,
             py::arg("threshold_magnetization") = "running")
        .def_readonly("J", &ModelParams::J)
        .def_readonly("lambda_", &ModelParams::lambda)
        .def_readonly("n", &ModelParams::n)
        .def_readonly("T", &ModelParams::T)
        .def_readonly("seed", &ModelParams::seed)
        .def_property_readonly("N", &ModelParams::N)
        .def_property_readonly("depth", &ModelParams::depth);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("m0", &TimeSeries::m0)
        .def_property_readonly("params",
                               [](const TimeSeries& ts) { return ts.params; })
        .def_property_readonly("m",
                               [](const TimeSeries& ts) {
                                   std::vector<double> m;
                                   m.reserve(ts.rounds.size());
                                   for (const auto& r : ts.rounds)
                                       m.push_back(r.m);
                                   return to_array(m);
                               })
        .def_property_readonly("restarted",
                               [](const TimeSeries& ts) {
                                   std::vector<std::int64_t> f;
                                   f.reserve(ts.rounds.size());
                                   for (const auto& r : ts.rounds)
                                       f.push_back(r.restarted ? 1 : 0);
                                   return to_array_i64(f);
                               })
        .def_property_readonly("flips",
                               [](const TimeSeries& ts) {
                                   std::vector<std::int64_t> f;
                                   f.reserve(ts.rounds.size());
                                   for (const auto& r : ts.rounds)
                                       f.push_back(r.flips);
                                   return to_array_i64(f);
                               })
        .def("restart_count", &TimeSeries::restart_count)
        .def("__len__", [](const TimeSeries& ts) { return ts.rounds.size(); });

    m.def("simulate", &simulate, py::arg("params"),
          py::call_guard<py::gil_scoped_release>());

    m.def("threshold_sign", &threshold_sign, py::arg("x"), py::arg("q"));
    m.def("agent_demand", &agent_demand, py::arg("prev"), py::arg("curr"));

    py::class_<ReturnSeries>(m, "ReturnSeries")
        .def_readonly("tau", &ReturnSeries::tau)
        .def_property_readonly(
            "t", [](const ReturnSeries& rs) { return to_array_i64(rs.t); })
        .def_property_readonly(
            "r", [](const ReturnSeries& rs) { return to_array(rs.r); })
        .def_property_readonly(
            "excluded",
            [](const ReturnSeries& rs) { return to_array_i64(rs.excluded); })
        .def("__len__", [](const ReturnSeries& rs) { return rs.r.size(); });

    m.def(
        "build_return_series",
        [](const TimeSeries& ts, int tau,
           std::optional<bool> include_restart_return) {
            if (include_restart_return)
                return build_return_series(ts, tau, *include_restart_return);
            return build_return_series(ts, tau);
        },
        py::arg("ts"), py::arg("tau") = 1,
        py::arg("include_restart_return") = std::nullopt);

    m.def(
        "return_series",
        [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& t,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& r) {
            ReturnSeries rs;
            rs.t.assign(t.data(), t.data() + t.size());
            rs.r.assign(r.data(), r.data() + r.size());
            return rs;
        },
        py::arg("t"), py::arg("r"),
        "Wrap externally supplied (t, r) arrays as a return series.");

    m.def("excess_demand", &excess_demand, py::arg("ts"), py::arg("t"),
          py::arg("tau"));
    m.def("log_return", &log_return, py::arg("ts"), py::arg("t"), py::arg("tau"),
          py::arg("depth"));
    m.def("subsample", &subsample, py::arg("rs"), py::arg("stride"),
          "Thin a return series to every stride-th observation, times "
          "relabeled in stride units.");

    py::class_<Histogram>(m, "Histogram")
        .def_property_readonly(
            "edges", [](const Histogram& h) { return to_array(h.edges); })
        .def_property_readonly(
            "counts", [](const Histogram& h) { return to_array_i64(h.counts); })
        .def_readonly("total", &Histogram::total)
        .def("center", &Histogram::center)
        .def("density", &Histogram::density)
        .def_property_readonly("centers",
                               [](const Histogram& h) {
                                   std::vector<double> c;
                                   for (int i = 0; i < h.bins(); ++i)
                                       c.push_back(h.center(i));
                                   return to_array(c);
                               })
        .def_property_readonly("densities", [](const Histogram& h) {
            std::vector<double> d;
            for (int i = 0; i < h.bins(); ++i) d.push_back(h.density(i));
            return to_array(d);
        });

    m.def(
        "rescaled_histogram",
        [](const ReturnSeries& rs, int bins) {
            return rescaled_histogram(rs, bins);
        },
        py::arg("rs"), py::arg("bins") = 101);

    m.def("cumulative_abs_distribution", [](const ReturnSeries& rs) {
        const CcdfCurve curve = cumulative_abs_distribution(rs);
        return py::make_tuple(to_array(curve.x), to_array(curve.p));
    });

    m.def(
        "autocorrelation",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& series,
           int max_lag) {
            const AcfCurve acf = autocorrelation(
                std::span(series.data(), static_cast<std::size_t>(series.size())),
                max_lag);
            return to_array(acf.c);
        },
        py::arg("series"), py::arg("max_lag"));

    m.def(
        "fit_truncated_powerlaw",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& acf_values,
           int lag_lo, int lag_hi) {
            AcfCurve acf;
            acf.c.assign(acf_values.data(), acf_values.data() + acf_values.size());
            const TruncPowerLawFit fit =
                fit_truncated_powerlaw(acf, lag_lo, lag_hi);
            py::dict d;
            d["amplitude"] = fit.amplitude;
            d["exponent"] = fit.exponent;
            d["cutoff"] = fit.cutoff;
            d["residual_rms"] = fit.residual_rms;
            d["points"] = fit.points;
            return d;
        },
        py::arg("acf"), py::arg("lag_lo"), py::arg("lag_hi"));

    m.def(
        "tail_exponent",
        [](const Histogram& hist, double q_lo, double q_hi) {
            const TailFit fit = tail_exponent(hist, q_lo, q_hi);
            py::dict d;
            d["exponent"] = fit.exponent;
            d["std_error"] = fit.std_error;
            d["drift"] = fit.drift;
            d["power_law"] = fit.power_law;
            d["points"] = fit.points;
            return d;
        },
        py::arg("hist"), py::arg("q_lo") = 0.99, py::arg("q_hi") = 0.9999);

    py::class_<IetSample>(m, "IetSample")
        .def_readonly("threshold", &IetSample::threshold)
        .def_readonly("events", &IetSample::events)
        .def_readonly("flagged", &IetSample::flagged)
        .def_property_readonly("intervals", [](const IetSample& s) {
            return to_array_i64(s.intervals);
        });

    m.def(
        "interevent_times",
        [](const ReturnSeries& rs, double rq, const std::string& kind) {
            return interevent_times(rs, rq, kind_of(kind));
        },
        py::arg("rs"), py::arg("rq"), py::arg("kind") = "loss");
    m.def(
        "interevent_times_absolute",
        [](const ReturnSeries& rs, double q, const std::string& kind) {
            return interevent_times_absolute(rs, q, kind_of(kind));
        },
        py::arg("rs"), py::arg("q"), py::arg("kind") = "loss");
    m.def("iet_distribution", &iet_distribution, py::arg("sample"),
          py::arg("ratio") = 1.25);

    m.def("lower_incomplete_gamma", &lower_incomplete_gamma, py::arg("a"),
          py::arg("x"));
    m.def("upper_incomplete_gamma", &upper_incomplete_gamma, py::arg("a"),
          py::arg("x"));

    m.def(
        "psi_q",
        [](double alpha, double tau_q, const std::string& branch, double dt) {
            const IetModel model{alpha, tau_q,
                                 branch == "minus" ? IetBranch::minus
                                                   : IetBranch::plus};
            return psi_q(model, dt);
        },
        py::arg("alpha"), py::arg("tau_q"), py::arg("branch"), py::arg("dt"));

    m.def(
        "fit_iet",
        [](const IetSample& sample, double ratio) {
            const IetFit fit = fit_iet(sample, ratio);
            py::dict d;
            d["alpha"] = fit.model.alpha;
            d["tau_q"] = fit.model.tau_q;
            d["branch"] = fit.model.branch == IetBranch::plus ? "plus" : "minus";
            d["residual"] = fit.residual;
            d["converged"] = fit.converged;
            d["residual_plus"] = fit.residual_plus;
            d["residual_minus"] = fit.residual_minus;
            return d;
        },
        py::arg("sample"), py::arg("ratio") = 1.25);

    m.def(
        "run_sweep",
        [](double lambda_start, double lambda_step, double lambda_stop,
           double K_start, double K_step, double K_stop, double b_start,
           double b_step, double b_stop, double b0_start, double b0_step,
           double b0_stop, std::int64_t T, int replicas, std::uint64_t base_seed,
           int n, int workers) {
            SweepGrid grid;
            grid.lambda_axis = {lambda_start, lambda_stop, lambda_step};
            grid.K_axis = {K_start, K_stop, K_step};
            grid.b_axis = {b_start, b_stop, b_step};
            grid.b0_axis = {b0_start, b0_stop, b0_step};
            grid.T = T;
            grid.replicas = replicas;
            grid.base_seed = base_seed;
            grid.n = n;
            std::vector<SweepRecord> records;
            {
                py::gil_scoped_release release;
                run_sweep(grid, workers,
                          [&](const SweepRecord& rec) { records.push_back(rec); });
            }
            py::list out;
            for (const auto& rec : records)
                out.append(py::make_tuple(rec.lambda, rec.K, rec.b, rec.b0,
                                          rec.replica, rec.seed, rec.m_final,
                                          rec.restarts));
            return out;
        },
        py::arg("lambda_start"), py::arg("lambda_step"), py::arg("lambda_stop"),
        py::arg("K_start"), py::arg("K_step"), py::arg("K_stop"),
        py::arg("b_start"), py::arg("b_step"), py::arg("b_stop"),
        py::arg("b0_start"), py::arg("b0_step"), py::arg("b0_stop"),
        py::arg("T") = 10000, py::arg("replicas") = 1, py::arg("base_seed") = 1,
        py::arg("n") = 32, py::arg("workers") = 1);
}
