#include "aelts/arma_model.hpp"
#include "aelts/bartlett.hpp"
#include "aelts/confidence.hpp"
#include "aelts/el_core.hpp"
#include "aelts/error.hpp"
#include "aelts/mc_harness.hpp"
#include "aelts/periodogram.hpp"
#include "aelts/version.hpp"
#include "aelts/whittle.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace aelts;

namespace {

FrequencyRange range_of(const std::string& text) {
    if (text == "half") return FrequencyRange::HalfBand;
    if (text == "full") return FrequencyRange::Full;
    throw InputError("bad frequency range '" + text + "': expected half or full");
}

AdjustmentPolicy policy_of(const std::string& text) {
    if (text == "maxhalflog") return AdjustmentPolicy::max_one_half_log();
    if (text == "halflog") return AdjustmentPolicy::half_log();
    if (text == "none") return AdjustmentPolicy::none();
    throw InputError("bad adjustment '" + text + "': expected maxhalflog, halflog or none");
}

ArmaOrder order_of(const std::pair<int, int>& order) {
    if (order.first < 0 || order.second < 0) throw InputError("ARMA order must be non-negative");
    return {order.first, order.second};
}

Periodogram to_periodogram(const std::vector<double>& series, const std::string& range) {
    return compute_periodogram(TimeSeries(series), range_of(range));
}

RegionOptions region_options(const std::string& method, double alpha, const std::string& adjustment,
                             std::optional<double> tb_constant) {
    RegionOptions o;
    o.method = parse_method(method);
    o.alpha = alpha;
    o.policy = policy_of(adjustment);
    o.tb_constant = tb_constant;
    return o;
}

py::dict solution_dict(const ElSolution& s) {
    return py::dict("stat"_a = s.stat, "xi"_a = s.xi, "weights"_a = s.weights, "converged"_a = s.converged,
                    "residual"_a = s.residual);
}

}  // namespace

PYBIND11_MODULE(_aelts, m) {
    m.doc() = "Adjusted empirical likelihood inference for ARMA models in the frequency domain";
    m.attr("__version__") = kVersion;

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_RuntimeError);
    py::register_exception<NoSolutionError>(m, "NoSolutionError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
    static_cast<void>(input_error);

    py::class_<Periodogram>(m, "Periodogram")
        .def_readonly("freqs", &Periodogram::freqs)
        .def_readonly("ords", &Periodogram::ords)
        .def_readonly("series_length", &Periodogram::series_length)
        .def_property_readonly("range",
                               [](const Periodogram& p) {
                                   return p.range == FrequencyRange::Full ? "full" : "half";
                               })
        .def("__len__", &Periodogram::size);

    m.def(
        "simulate",
        [](std::vector<double> ar, std::vector<double> ma, double sigma2, std::size_t length,
           std::uint64_t seed, const std::string& noise) {
            SimulationOptions opts;
            opts.noise = parse_noise(noise);
            const TimeSeries ts = simulate(ArmaSpec{std::move(ar), std::move(ma), sigma2}, length, seed, opts);
            return std::vector<double>(ts.values().begin(), ts.values().end());
        },
        "ar"_a = std::vector<double>{}, "ma"_a = std::vector<double>{}, "sigma2"_a = 1.0, "length"_a,
        "seed"_a, "noise"_a = "normal",
        "Simulate a causal, invertible ARMA series. The MA side uses the minus-sign convention.");

    m.def("periodogram", &to_periodogram, "series"_a, "range"_a = "half",
          "Periodogram at the nonzero Fourier frequencies of a series.");

    m.def(
        "spectral_density",
        [](std::vector<double> ar, std::vector<double> ma, double sigma2, double omega) {
            return spectral_density(ArmaSpec{std::move(ar), std::move(ma), sigma2}, omega);
        },
        "ar"_a = std::vector<double>{}, "ma"_a = std::vector<double>{}, "sigma2"_a = 1.0, "omega"_a);

    m.def(
        "whittle_fit",
        [](const Periodogram& pg, std::pair<int, int> order, bool profile, std::uint64_t seed) {
            FitOptions opts;
            opts.profile = profile;
            opts.start_seed = seed;
            const WhittleFit fit = whittle_fit(pg, order_of(order), opts);
            return py::dict("estimate"_a = fit.estimate, "sigma2"_a = fit.sigma2, "loglik"_a = fit.loglik,
                            "converged"_a = fit.converged, "iterations"_a = fit.iterations,
                            "starts"_a = fit.starts);
        },
        "periodogram"_a, "order"_a, "profile"_a = true, "seed"_a = 0x5eed,
        "Whittle estimate of the ARMA coefficients (plus sigma2 when profile is False).");

    m.def(
        "sandwich",
        [](const Periodogram& pg, std::pair<int, int> order, const Eigen::VectorXd& params, bool profile,
           const std::string& adjustment) {
            const SandwichDiag d = sandwich(pg, order_of(order), params, profile, policy_of(adjustment));
            return py::dict("A_hat"_a = d.A_hat, "Sigma_hat"_a = d.Sigma_hat, "V_hat"_a = d.V_hat,
                            "A_condition"_a = d.a_condition);
        },
        "periodogram"_a, "order"_a, "params"_a, "profile"_a = true, "adjustment"_a = "none");

    m.def(
        "solve_dual",
        [](const Eigen::MatrixXd& rows, const std::string& adjustment) {
            PsiMatrix psi;
            psi.rows = rows;
            return solution_dict(solve_dual(adjust(psi, policy_of(adjustment))));
        },
        "rows"_a, "adjustment"_a = "none",
        "Empirical likelihood ratio statistic for the mean of the rows being zero.");

    m.def(
        "el_stat",
        [](const Periodogram& pg, std::pair<int, int> order, const Eigen::VectorXd& params, bool adjusted,
           bool profile, const std::string& adjustment) {
            StatOptions opts;
            opts.adjusted = adjusted;
            opts.profile = profile;
            opts.policy = policy_of(adjustment);
            return solution_dict(el_stat(pg, order_of(order), params, opts));
        },
        "periodogram"_a, "order"_a, "params"_a, "adjusted"_a = true, "profile"_a = true,
        "adjustment"_a = "maxhalflog",
        "EL (adjusted=False) or adjusted EL statistic at params. Raises NoSolutionError when undefined.");

    m.def("chi_square_quantile", &chi_square_quantile, "df"_a, "alpha"_a);

    m.def(
        "bartlett_factor",
        [](const Eigen::VectorXd& values) {
            PsiMatrix psi;
            psi.rows = values;
            return estimate_bartlett(psi).b();
        },
        "values"_a, "Estimated Bartlett factor of a scalar estimating function.");

    m.def(
        "scan_region",
        [](const Periodogram& pg, std::pair<int, int> order, const std::vector<std::tuple<double, double, int>>& box,
           const std::string& method, double alpha, const std::string& adjustment,
           std::optional<double> tb_constant) {
            std::vector<Axis> axes;
            for (const auto& [lo, hi, steps] : box) axes.push_back({lo, hi, steps});
            const RegionGrid grid =
                scan_region(pg, order_of(order), axes, region_options(method, alpha, adjustment, tb_constant));
            Eigen::MatrixXd nodes(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(axes.size()));
            std::vector<std::string> status;
            std::vector<bool> inside;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                nodes.row(static_cast<Eigen::Index>(i)) = grid.node(i).transpose();
                status.emplace_back(to_string(grid.status[i]));
                inside.push_back(grid.inside(i));
            }
            py::list contours;
            if (axes.size() == 2) {
                for (const auto& poly : extract_contour(grid)) {
                    Eigen::MatrixXd pts(static_cast<Eigen::Index>(poly.points.size()), 2);
                    for (std::size_t v = 0; v < poly.points.size(); ++v) {
                        pts.row(static_cast<Eigen::Index>(v)) = poly.points[v].transpose();
                    }
                    contours.append(py::dict("points"_a = pts, "closed"_a = poly.closed,
                                             "area"_a = poly.closed ? polygon_area(poly) : 0.0));
                }
            }
            return py::dict("nodes"_a = nodes, "stat"_a = grid.stat, "threshold"_a = grid.threshold,
                            "status"_a = status, "inside"_a = inside,
                            "nominal_threshold"_a = grid.nominal_threshold, "contours"_a = contours);
        },
        "periodogram"_a, "order"_a, "box"_a, "method"_a = "ael", "alpha"_a = 0.1, "adjustment"_a = "maxhalflog",
        "tb_constant"_a = py::none(),
        "Evaluate a method's statistic on a grid. box holds (lo, hi, steps) per parameter; "
        "two-parameter grids also return contour polylines.");

    m.def(
        "interval",
        [](const Periodogram& pg, std::pair<int, int> order, const std::string& method, double alpha,
           const std::string& adjustment, std::optional<double> tb_constant) {
            const Interval iv =
                interval_1d(pg, order_of(order), region_options(method, alpha, adjustment, tb_constant));
            return py::dict("lo"_a = iv.lo, "hi"_a = iv.hi, "estimate"_a = iv.estimate,
                            "lo_kind"_a = std::string(to_string(iv.lo_kind)),
                            "hi_kind"_a = std::string(to_string(iv.hi_kind)), "threshold"_a = iv.threshold);
        },
        "periodogram"_a, "order"_a, "method"_a = "ael", "alpha"_a = 0.1, "adjustment"_a = "maxhalflog",
        "tb_constant"_a = py::none(), "Confidence interval for a one-parameter model.");

    m.def(
        "run_coverage",
        [](const std::string& plan_text, std::optional<int> replications) {
            std::istringstream in(plan_text);
            ExperimentPlan plan = parse_plan(in);
            if (replications) plan.replications = *replications;
            validate(plan);
            CoverageReport report;
            {
                py::gil_scoped_release release;
                report = run_coverage(plan);
            }
            py::list cells;
            for (const auto& c : report.cells) {
                cells.append(py::dict("model"_a = std::string(to_string(c.family)), "n"_a = c.n,
                                      "noise"_a = std::string(to_string(c.noise)), "param"_a = c.param,
                                      "method"_a = std::string(to_string(c.method)), "coverage"_a = c.coverage,
                                      "se"_a = c.se, "nosolution_count"_a = c.nosolution_count,
                                      "replications"_a = c.replications, "failure_count"_a = c.failure_count));
            }
            return cells;
        },
        "plan"_a, "replications"_a = py::none(),
        "Run a coverage experiment described by plan-file text; returns one dict per cell and method.");
}
