// aelts: command-line front end for spectral (adjusted) empirical likelihood.
//
// Exit codes: 0 success, 2 input/config error, 3 numerical non-convergence.

#include "series_io.hpp"

#include "aelts/bartlett.hpp"
#include "aelts/confidence.hpp"
#include "aelts/error.hpp"
#include "aelts/mc_harness.hpp"
#include "aelts/periodogram.hpp"
#include "aelts/version.hpp"
#include "aelts/whittle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace aelts::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

// Ordered key/value metadata that heads every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

Metadata base_metadata(const std::string& command) {
    return {{"tool", "aelts"}, {"version", kVersion}, {"command", command},
            {"generated", utc_timestamp()}};
}

void write_csv_metadata(std::ostream& out, const Metadata& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

json metadata_json(const Metadata& meta) {
    json j = json::object();
    for (const auto& [key, value] : meta) j[key] = value;
    return j;
}

// Machine output goes to --out when given, otherwise to stdout; the human
// summary then moves to stderr so stdout stays parseable.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InputError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& data() { return file_ ? *file_ : std::cout; }
    std::ostream& summary() { return file_ ? std::cout : std::cerr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("bad " + what + " '" + text + "': expected comma-separated numbers");
        }
    }
    if (out.empty()) throw InputError("bad " + what + " '" + text + "': empty");
    return out;
}

ArmaOrder parse_order(const std::string& text) {
    const auto comma = text.find(',');
    auto bad = [&] { return InputError("bad order '" + text + "': expected p,q with small nonnegative integers"); };
    if (comma == std::string::npos) throw bad();
    int p = 0;
    int q = 0;
    try {
        std::size_t used_p = 0;
        std::size_t used_q = 0;
        const std::string ps = text.substr(0, comma);
        const std::string qs = text.substr(comma + 1);
        p = std::stoi(ps, &used_p);
        q = std::stoi(qs, &used_q);
        if (used_p != ps.size() || used_q != qs.size()) throw bad();
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw bad();
    }
    if (p < 0 || q < 0 || p > 10 || q > 10) throw bad();
    return {p, q};
}

FrequencyRange parse_range(const std::string& text) {
    if (text == "half") return FrequencyRange::HalfBand;
    if (text == "full") return FrequencyRange::Full;
    throw InputError("bad frequency range '" + text + "': expected half or full");
}

std::string_view range_name(FrequencyRange range) {
    return range == FrequencyRange::Full ? "full" : "half";
}

std::vector<std::string> parameter_names(ArmaOrder order, bool with_sigma2) {
    std::vector<std::string> names;
    for (int i = 1; i <= order.p; ++i) names.push_back(order.p == 1 ? "phi" : "phi" + std::to_string(i));
    for (int i = 1; i <= order.q; ++i) names.push_back(order.q == 1 ? "theta" : "theta" + std::to_string(i));
    if (with_sigma2) names.emplace_back("sigma2");
    return names;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------- periodogram

struct PeriodogramArgs {
    std::string input;
    std::string out;
    std::string format = "csv";
    std::string range = "half";
};

int cmd_periodogram(const PeriodogramArgs& args) {
    const TimeSeries series = read_series_file(args.input);
    const Periodogram pg = compute_periodogram(series, parse_range(args.range));
    Metadata meta = base_metadata("periodogram");
    meta.emplace_back("input", args.input);
    meta.emplace_back("series_length", std::to_string(series.size()));
    meta.emplace_back("frequencies", std::string(range_name(pg.range)));

    Sink sink(args.out);
    std::ostream& out = sink.data();
    out << std::setprecision(17);
    if (args.format == "json") {
        json rows = json::array();
        for (std::size_t j = 0; j < pg.size(); ++j) {
            rows.push_back({{"j", j + 1}, {"omega", pg.freqs[j]}, {"I", pg.ords[j]}});
        }
        out << json{{"format", "json"}, {"metadata", metadata_json(meta)}, {"payload", rows}}.dump(2)
            << '\n';
    } else {
        write_csv_metadata(out, meta);
        out << "j,omega,I\n";
        for (std::size_t j = 0; j < pg.size(); ++j) {
            out << j + 1 << ',' << pg.freqs[j] << ',' << pg.ords[j] << '\n';
        }
    }
    sink.summary() << "periodogram: T=" << series.size() << ", " << pg.size()
                   << " ordinates (" << range_name(pg.range) << " band)\n";
    return kExitOk;
}

// ------------------------------------------------------------------------ fit

struct FitArgs {
    std::string input;
    std::string order;
    bool full = false;
    std::uint64_t seed = 0x5eed;
    std::string range = "full";
    std::string out;
};

int cmd_fit(const FitArgs& args) {
    const ArmaOrder order = parse_order(args.order);
    const TimeSeries series = read_series_file(args.input);
    const Periodogram pg = compute_periodogram(series, parse_range(args.range));
    const bool profile = !args.full;

    FitOptions options;
    options.profile = profile;
    options.start_seed = args.seed;
    const WhittleFit fit = whittle_fit(pg, order, options);

    const auto names = parameter_names(order, !profile);
    json estimate = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) estimate[names[i]] = fit.estimate[static_cast<Eigen::Index>(i)];

    json diag = nullptr;
    if (fit.estimate.size() > 0) {
        try {
            const SandwichDiag sw = sandwich(pg, order, fit.estimate, profile, AdjustmentPolicy::none());
            diag = {{"A_hat", matrix_json(sw.A_hat)},
                    {"Sigma_hat", matrix_json(sw.Sigma_hat)},
                    {"V_hat", matrix_json(sw.V_hat)},
                    {"A_condition", sw.a_condition}};
        } catch (const SingularMatrixError& e) {
            diag = {{"error", e.what()}, {"A_condition", e.condition()}};
        }
    }

    Metadata meta = base_metadata("fit");
    meta.emplace_back("input", args.input);
    meta.emplace_back("seed", std::to_string(args.seed));
    meta.emplace_back("frequencies", std::string(range_name(pg.range)));
    json payload = {{"order", {{"p", order.p}, {"q", order.q}}},
                    {"profile", profile},
                    {"parameters", names},
                    {"estimate", estimate},
                    {"sigma2", fit.sigma2},
                    {"loglik", fit.loglik},
                    {"converged", fit.converged},
                    {"iterations", fit.iterations},
                    {"starts", fit.starts},
                    {"sandwich", diag}};
    const json doc = {{"format", "json"}, {"metadata", metadata_json(meta)}, {"payload", payload}};

    std::cout << std::setprecision(17) << doc.dump(2) << '\n';
    if (!args.out.empty()) {
        std::ofstream file(args.out);
        if (!file) throw InputError("cannot open output file '" + args.out + "'");
        file << doc.dump(2) << '\n';
    }
    if (!fit.converged) {
        std::cerr << "fit: optimizer did not converge after " << fit.iterations << " iterations\n";
        return kExitNumeric;
    }
    return kExitOk;
}

// --------------------------------------------------------------------- region

struct RegionArgs {
    std::string input;
    std::string order;
    std::string method = "ael";
    double alpha = 0.1;
    std::string box;
    std::string steps;
    std::optional<double> tb_constant;
    std::string adjustment = "maxhalflog";
    std::string range = "full";
    std::string out;
    std::string contours;
    std::string format = "csv";
};

AdjustmentPolicy parse_adjustment(const std::string& text) {
    if (text == "maxhalflog") return AdjustmentPolicy::max_one_half_log();
    if (text == "halflog") return AdjustmentPolicy::half_log();
    if (text == "none") return AdjustmentPolicy::none();
    throw InputError("bad adjustment '" + text + "': expected maxhalflog, halflog or none");
}

std::vector<Axis> parse_box(const std::string& box, const std::string& steps, int k) {
    std::vector<double> b = box.empty() ? std::vector<double>{0.01, 0.99} : parse_numbers(box, "box");
    std::vector<double> s = steps.empty() ? std::vector<double>{k == 1 ? 200.0 : 60.0}
                                          : parse_numbers(steps, "steps");
    if (b.size() == 2) {
        for (int i = 1; i < k; ++i) b.insert(b.end(), {b[0], b[1]});
    }
    if (s.size() == 1) s.resize(static_cast<std::size_t>(k), s[0]);
    if (b.size() != 2 * static_cast<std::size_t>(k)) {
        throw InputError("bad box: expected lo,hi for each of the " + std::to_string(k) + " parameters");
    }
    if (s.size() != static_cast<std::size_t>(k)) throw InputError("bad steps: expected one count per parameter");
    std::vector<Axis> axes;
    for (int i = 0; i < k; ++i) {
        const double lo = b[2 * i];
        const double hi = b[2 * i + 1];
        const double n = s[static_cast<std::size_t>(i)];
        if (!(lo < hi)) throw InputError("bad box: lo must be below hi");
        if (n < 2 || n != std::floor(n) || n > 10000) throw InputError("bad steps: need integers in [2, 10000]");
        axes.push_back({lo, hi, static_cast<int>(n)});
    }
    return axes;
}

int cmd_region(const RegionArgs& args) {
    const ArmaOrder order = parse_order(args.order);
    const int k = order.profile_dim();
    if (k < 1) throw InputError("region needs at least one ARMA coefficient");
    if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");

    RegionOptions options;
    try {
        options.method = parse_method(args.method);
    } catch (const InputError&) {
        throw InputError("bad method '" + args.method + "': expected el, ael, eb or tb");
    }
    options.alpha = args.alpha;
    options.policy = parse_adjustment(args.adjustment);
    options.tb_constant = args.tb_constant;
    if (options.method == Method::TB && !options.tb_constant) {
        throw ConfigError("method tb requires --tb-constant");
    }
    if (options.method == Method::EB && k != 1) {
        throw ConfigError("method eb needs a one-parameter model");
    }

    const auto axes = parse_box(args.box, args.steps, k);
    const TimeSeries series = read_series_file(args.input);
    const Periodogram pg = compute_periodogram(series, parse_range(args.range));
    const RegionGrid grid = scan_region(pg, order, axes, options);
    const std::vector<Polyline> polylines = k == 2 ? extract_contour(grid) : std::vector<Polyline>{};

    std::size_t inside = 0;
    std::size_t undefined = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        inside += grid.inside(i) ? 1 : 0;
        undefined += grid.status[i] != NodeStatus::Ok ? 1 : 0;
    }

    Metadata meta = base_metadata("region");
    meta.emplace_back("input", args.input);
    meta.emplace_back("order", std::to_string(order.p) + "," + std::to_string(order.q));
    meta.emplace_back("method", std::string(to_string(options.method)));
    meta.emplace_back("alpha", args.alpha == 0.1 ? "0.1" : std::to_string(args.alpha));
    meta.emplace_back("policy", options.method == Method::AEL ? options.policy.describe() : "none");
    meta.emplace_back("frequencies", std::string(range_name(pg.range)));
    std::ostringstream thr;
    thr << std::setprecision(10) << grid.nominal_threshold;
    meta.emplace_back("threshold", thr.str());

    const auto names = parameter_names(order, false);
    Sink sink(args.out);
    std::ostream& out = sink.data();
    out << std::setprecision(12);
    if (args.format == "json") {
        json nodes = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Eigen::VectorXd at = grid.node(i);
            json node = {{"index", i}, {"status", to_string(grid.status[i])}, {"inside", grid.inside(i)},
                         {"threshold", grid.threshold[i]}};
            for (int c = 0; c < k; ++c) node[names[static_cast<std::size_t>(c)]] = at[c];
            node["stat"] = grid.status[i] == NodeStatus::Ok ? json(grid.stat[i]) : json(nullptr);
            nodes.push_back(node);
        }
        json lines = json::array();
        for (const auto& poly : polylines) {
            json pts = json::array();
            for (const auto& p : poly.points) pts.push_back({p.x(), p.y()});
            lines.push_back({{"closed", poly.closed}, {"points", pts}});
        }
        json payload = {{"threshold", grid.nominal_threshold}, {"nodes", nodes}, {"polylines", lines}};
        out << json{{"format", "json"}, {"metadata", metadata_json(meta)}, {"payload", payload}}.dump(2)
            << '\n';
    } else {
        write_csv_metadata(out, meta);
        out << "index";
        for (const auto& n : names) out << ',' << n;
        out << ",stat,threshold,status,inside\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Eigen::VectorXd at = grid.node(i);
            out << i;
            for (int c = 0; c < k; ++c) out << ',' << at[c];
            out << ',';
            if (grid.status[i] == NodeStatus::Ok) out << grid.stat[i];
            else out << "NA";
            out << ',' << grid.threshold[i] << ',' << to_string(grid.status[i]) << ','
                << (grid.inside(i) ? 1 : 0) << '\n';
        }
    }
    if (!args.contours.empty()) {
        if (k != 2) throw InputError("--contours needs a two-parameter model");
        std::ofstream file(args.contours);
        if (!file) throw InputError("cannot open output file '" + args.contours + "'");
        write_csv_metadata(file, meta);
        file << std::setprecision(12) << "polyline,closed,vertex," << names[0] << ',' << names[1] << '\n';
        for (std::size_t l = 0; l < polylines.size(); ++l) {
            const auto& poly = polylines[l];
            for (std::size_t v = 0; v < poly.points.size(); ++v) {
                file << l << ',' << (poly.closed ? 1 : 0) << ',' << v << ',' << poly.points[v].x() << ','
                     << poly.points[v].y() << '\n';
            }
        }
    }

    std::ostream& summary = sink.summary();
    summary << "region: " << to_string(options.method) << ", alpha=" << args.alpha
            << ", threshold=" << grid.nominal_threshold << "\n";
    summary << "  nodes inside: " << inside << " of " << grid.size();
    if (undefined > 0) summary << " (" << undefined << " undefined)";
    summary << "\n";
    if (k == 2) {
        summary << "  contour polylines: " << polylines.size() << "\n";
        for (std::size_t l = 0; l < polylines.size(); ++l) {
            summary << "    #" << l << ": " << polylines[l].points.size() << " vertices, "
                    << (polylines[l].closed ? "closed, area " : "open")
                    << (polylines[l].closed ? std::to_string(polygon_area(polylines[l])) : "") << "\n";
        }
    }
    if (k == 1 && options.method != Method::EB) {
        try {
            const Interval iv = interval_1d(pg, order, options);
            summary << "  interval: [" << iv.lo << ", " << iv.hi << "] (" << to_string(iv.lo_kind) << "/"
                    << to_string(iv.hi_kind) << "), estimate " << iv.estimate << "\n";
        } catch (const std::exception& e) {
            summary << "  interval: unavailable (" << e.what() << ")\n";
        }
    }
    return kExitOk;
}

// ------------------------------------------------------------------- coverage

struct CoverageArgs {
    std::string plan;
    std::string out;
    std::optional<int> replications;
    bool progress = false;
};

std::string plan_params(const ExperimentPlan& plan) {
    std::ostringstream s;
    for (std::size_t i = 0; i < plan.params.size(); ++i) {
        if (i > 0) s << ' ';
        for (std::size_t c = 0; c < plan.params[i].size(); ++c) s << (c > 0 ? ":" : "") << plan.params[i][c];
    }
    return s.str();
}

int cmd_coverage(const CoverageArgs& args) {
    ExperimentPlan plan = load_plan(args.plan);
    if (args.replications) {
        plan.replications = *args.replications;
        validate(plan);
    }

    ProgressCallback progress;
    if (args.progress) {
        progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 500 == 0) std::cerr << "\r  " << done << "/" << total << std::flush;
            if (done == total) std::cerr << "\n";
        };
    }
    const CoverageReport report = run_coverage(plan, progress);

    Metadata meta = base_metadata("coverage");
    meta.emplace_back("plan", args.plan);
    meta.emplace_back("model", std::string(to_string(plan.family)));
    meta.emplace_back("params", plan_params(plan));
    meta.emplace_back("seed", std::to_string(plan.seed));
    meta.emplace_back("replications", std::to_string(plan.replications));
    meta.emplace_back("nominal", std::to_string(plan.nominal));
    meta.emplace_back("policy", plan.policy.describe());
    meta.emplace_back("frequencies", std::string(range_name(plan.frequencies)));
    meta.emplace_back("nosolution", plan.nosolution_as_noncoverage ? "noncoverage" : "exclude");

    Sink sink(args.out);
    write_csv_metadata(sink.data(), meta);
    write_coverage_csv(sink.data(), report);

    std::ostream& summary = sink.summary();
    summary << "coverage: " << to_string(plan.family) << ", R=" << plan.replications << ", nominal "
            << plan.nominal << ", a_n=" << plan.policy.describe() << "\n";
    summary << std::fixed << std::setprecision(3);
    for (const auto& c : report.cells) {
        summary << "  n=" << std::setw(4) << c.n << "  " << std::setw(6) << to_string(c.noise) << "  param="
                << plan_params(ExperimentPlan{.params = {c.param}}) << "  " << std::setw(3)
                << to_string(c.method) << "  " << c.coverage << " (se " << c.se << ")";
        if (c.nosolution_count > 0) summary << "  nosolution=" << c.nosolution_count;
        if (c.failure_count > 0) summary << "  failures=" << c.failure_count;
        summary << "\n";
    }
    const PairedSummary paired = paired_summary(report);
    if (paired.rows.size() > paired.incomplete_count + 0u && paired.incomplete_count == 0) {
        summary << "  AEL closer to nominal in " << paired.ael_closer_count << " of " << paired.rows.size()
                << " cells\n";
    }
    summary << std::defaultfloat;
    return kExitOk;
}

// ------------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string ar;
    std::string ma;
    double sigma2 = 1.0;
    std::size_t length = 100;
    std::uint64_t seed = 1;
    std::string noise = "normal";
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    ArmaSpec spec;
    if (!args.ar.empty()) spec.ar = parse_numbers(args.ar, "ar coefficients");
    if (!args.ma.empty()) spec.ma = parse_numbers(args.ma, "ma coefficients");
    spec.sigma2 = args.sigma2;
    NoiseKind noise;
    try {
        noise = parse_noise(args.noise);
    } catch (const ConfigError& e) {
        throw InputError(e.what());
    }
    if (args.length < TimeSeries::kMinLength) throw InputError("length must be at least 4");
    const TimeSeries series = simulate(spec, args.length, args.seed, {noise, NoiseCentering::ExactMean});

    Sink sink(args.out);
    Metadata meta = base_metadata("simulate");
    meta.emplace_back("seed", std::to_string(args.seed));
    meta.emplace_back("ar", args.ar.empty() ? "-" : args.ar);
    meta.emplace_back("ma", args.ma.empty() ? "-" : args.ma);
    meta.emplace_back("noise", std::string(to_string(noise)));
    write_csv_metadata(sink.data(), meta);
    write_series(sink.data(), series);
    sink.summary() << "simulate: " << series.size() << " observations, seed " << args.seed << "\n";
    return kExitOk;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitNumeric;
    } catch (const SingularMatrixError& e) {
        std::cerr << "error: " << e.what() << " (condition " << e.condition() << ")\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace
}  // namespace aelts::cli

int main(int argc, char** argv) {
    using namespace aelts::cli;
    CLI::App app{"Spectral empirical likelihood inference for ARMA models"};
    app.set_version_flag("--version", std::string(aelts::kVersion));
    app.require_subcommand(1);

    PeriodogramArgs pga;
    auto* pg = app.add_subcommand("periodogram", "Periodogram ordinates of a series file");
    pg->add_option("input", pga.input, "Series file, one value per line")->required();
    pg->add_option("--out", pga.out, "Output path (default stdout)");
    pg->add_option("--format", pga.format)->check(CLI::IsMember({"csv", "json"}));
    pg->add_option("--range", pga.range, "half: 0 < w < pi; full: all nonzero Fourier frequencies")
        ->check(CLI::IsMember({"half", "full"}));

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Whittle estimate with sandwich diagnostics (JSON)");
    fit->add_option("input", fa.input)->required();
    fit->add_option("--order", fa.order, "p,q")->required();
    fit->add_flag("--full", fa.full, "Fit (phi, theta, sigma2) jointly instead of profiling sigma2 out");
    fit->add_flag("--profile,!--no-profile", [&fa](std::int64_t count) { fa.full = count < 0; },
                  "Profile sigma2 out (default)");
    fit->add_option("--seed", fa.seed, "Seed for the jittered starting points");
    fit->add_option("--range", fa.range)->check(CLI::IsMember({"half", "full"}));
    fit->add_option("--out", fa.out);

    RegionArgs ra;
    auto* region = app.add_subcommand("region", "Confidence region scan and contour");
    region->add_option("input", ra.input)->required();
    region->add_option("--order", ra.order, "p,q")->required();
    region->add_option("--method", ra.method, "el, ael, eb or tb");
    region->add_option("--alpha", ra.alpha);
    region->add_option("--box", ra.box, "lo,hi (all axes) or lo1,hi1,lo2,hi2");
    region->add_option("--steps", ra.steps, "Nodes per axis: N or N1,N2");
    region->add_option("--tb-constant", ra.tb_constant, "Supplied Bartlett constant for method tb");
    region->add_option("--adjustment", ra.adjustment)->check(CLI::IsMember({"maxhalflog", "halflog", "none"}));
    region->add_option("--range", ra.range)->check(CLI::IsMember({"half", "full"}));
    region->add_option("--out", ra.out, "Grid output path (default stdout)");
    region->add_option("--contours", ra.contours, "Contour polyline CSV path");
    region->add_option("--format", ra.format)->check(CLI::IsMember({"csv", "json"}));

    CoverageArgs ca;
    auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage sweep from a plan file");
    cov->add_option("--plan", ca.plan)->required();
    cov->add_option("--out", ca.out);
    cov->add_option("--replications", ca.replications, "Override the plan's replication count");
    cov->add_flag("--progress", ca.progress);

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Simulate an ARMA series");
    sim->add_option("--ar", sa.ar, "Comma-separated AR coefficients");
    sim->add_option("--ma", sa.ma, "Comma-separated MA coefficients (theta(B) = 1 - theta_1 B - ...)");
    sim->add_option("--sigma2", sa.sigma2);
    sim->add_option("--length", sa.length);
    sim->add_option("--seed", sa.seed);
    sim->add_option("--noise", sa.noise)->check(CLI::IsMember({"normal", "chisq5"}));
    sim->add_option("--out", sa.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    if (*pg) return guarded([&] { return cmd_periodogram(pga); });
    if (*fit) return guarded([&] { return cmd_fit(fa); });
    if (*region) return guarded([&] { return cmd_region(ra); });
    if (*cov) return guarded([&] { return cmd_coverage(ca); });
    if (*sim) return guarded([&] { return cmd_simulate(sa); });
    return kExitInput;
}
