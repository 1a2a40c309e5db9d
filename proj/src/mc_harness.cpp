#include "aelts/mc_harness.hpp"

#include "aelts/bartlett.hpp"
#include "aelts/error.hpp"
#include "aelts/whittle.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace aelts {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("plan field '" + field + "': '" + text + "' is not a number");
    }
}

long long parse_integer(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("plan field '" + field + "': '" + text + "' is not an integer");
    }
}

std::string format_param(const std::vector<double>& param) {
    std::ostringstream s;
    s << std::setprecision(10);
    for (std::size_t i = 0; i < param.size(); ++i) {
        if (i > 0) s << ':';
        s << param[i];
    }
    return s.str();
}

struct MethodTally {
    int covered = 0;
    int used = 0;
    int nosolution = 0;
    int failures = 0;
    std::vector<double> stats;
    std::vector<std::uint8_t> indicators;
};

}  // namespace

std::string_view to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::MA1: return "ma1";
        case ModelFamily::AR1: return "ar1";
        case ModelFamily::ARMA11: return "arma11";
    }
    return "?";
}

ModelFamily parse_family(std::string_view text) {
    const std::string t = lowercase(text);
    if (t == "ma1" || t == "ma(1)") return ModelFamily::MA1;
    if (t == "ar1" || t == "ar(1)") return ModelFamily::AR1;
    if (t == "arma11" || t == "arma(1,1)") return ModelFamily::ARMA11;
    throw ConfigError("plan field 'model': unknown model '" + std::string(text) + "'");
}

ArmaOrder order_of(ModelFamily family) {
    switch (family) {
        case ModelFamily::MA1: return {0, 1};
        case ModelFamily::AR1: return {1, 0};
        case ModelFamily::ARMA11: return {1, 1};
    }
    return {};
}

std::string_view to_string(NoiseKind kind) {
    return kind == NoiseKind::StandardNormal ? "normal" : "chisq5";
}

NoiseKind parse_noise(std::string_view text) {
    const std::string t = lowercase(text);
    if (t == "normal" || t == "n") return NoiseKind::StandardNormal;
    if (t == "chisq5" || t == "chi2" || t == "chisq") return NoiseKind::CenteredChiSq5;
    throw ConfigError("plan field 'noise': unknown noise '" + std::string(text) + "'");
}

void validate(const ExperimentPlan& plan) {
    const ArmaOrder order = order_of(plan.family);
    if (plan.replications < 1) throw ConfigError("plan field 'replications' must be >= 1");
    if (!(plan.nominal > 0.0 && plan.nominal < 1.0)) {
        throw ConfigError("plan field 'nominal' must lie in (0, 1)");
    }
    if (plan.params.empty()) throw ConfigError("plan field 'params' is empty");
    if (plan.sample_sizes.empty()) throw ConfigError("plan field 'sizes' is empty");
    if (plan.noises.empty()) throw ConfigError("plan field 'noise' is empty");
    if (plan.methods.empty()) throw ConfigError("plan field 'methods' is empty");
    for (const auto& p : plan.params) {
        if (static_cast<int>(p.size()) != order.profile_dim()) {
            throw ConfigError("plan field 'params': point " + format_param(p) +
                              " has the wrong number of components for " +
                              std::string(to_string(plan.family)));
        }
        const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
        if (region_violation(order, v, true) > 0.0) {
            throw ConfigError("plan field 'params': point " + format_param(p) +
                              " is outside the stationarity/invertibility region");
        }
    }
    for (auto n : plan.sample_sizes) {
        if (n < TimeSeries::kMinLength) throw ConfigError("plan field 'sizes': sizes must be >= 4");
    }
    for (auto m : plan.methods) {
        if (m == Method::EB && order.profile_dim() != 1) {
            throw ConfigError("plan field 'methods': eb needs a one-parameter model");
        }
        if (m == Method::TB && !plan.tb_constant) {
            throw ConfigError("plan field 'tb_constant' is required for method tb");
        }
    }
    if (plan.policy.rule == AdjustmentPolicy::Rule::Constant && !(plan.policy.constant > 0.0)) {
        throw ConfigError("plan field 'adjustment': constant must be positive");
    }
}

const CoverageCell* CoverageReport::find(std::size_t n, NoiseKind noise,
                                         const std::vector<double>& param, Method method) const {
    for (const auto& c : cells) {
        if (c.n == n && c.noise == noise && c.param == param && c.method == method) return &c;
    }
    return nullptr;
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t cell, std::size_t replication) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(replication)};
    std::uint32_t words[2];
    seq.generate(std::begin(words), std::end(words));
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

CoverageReport run_coverage(const ExperimentPlan& plan, const ProgressCallback& progress) {
    validate(plan);
    const ArmaOrder order = order_of(plan.family);
    const int k = order.profile_dim();
    const double alpha = 1.0 - plan.nominal;
    const double nominal_threshold = chi_square_quantile(k, alpha);
    const bool need_el = std::any_of(plan.methods.begin(), plan.methods.end(),
                                     [](Method m) { return m != Method::AEL; });
    const double inf = std::numeric_limits<double>::infinity();

    CoverageReport report;
    report.plan = plan;
    const std::size_t total = plan.params.size() * plan.sample_sizes.size() * plan.noises.size() *
                              static_cast<std::size_t>(plan.replications);
    std::size_t done = 0;
    std::size_t cell_index = 0;

    for (const auto& param : plan.params) {
        const Eigen::VectorXd beta1 =
            Eigen::Map<const Eigen::VectorXd>(param.data(), static_cast<Eigen::Index>(param.size()));
        const ArmaSpec truth = ArmaSpec::from_profile(order, beta1, 1.0);
        for (const auto n : plan.sample_sizes) {
            for (const auto noise : plan.noises) {
                std::map<Method, MethodTally> tally;
                for (auto m : plan.methods) tally[m];

                for (int rep = 0; rep < plan.replications; ++rep) {
                    const auto seed = replication_seed(plan.seed, cell_index, static_cast<std::size_t>(rep));
                    const TimeSeries series = simulate(truth, n, seed, {noise, plan.centering});
                    const Periodogram pg = compute_periodogram(series, plan.frequencies);
                    const PsiMatrix psi = psi_profile(pg, order, beta1);
                    const auto rows = static_cast<std::size_t>(psi.size());

                    enum class Outcome { Ok, NoSolution, Failed };
                    Outcome el_outcome = Outcome::Failed;
                    double el_stat = inf;
                    if (need_el) {
                        try {
                            el_stat = solve_dual(psi).stat;
                            el_outcome = Outcome::Ok;
                        } catch (const NoSolutionError&) {
                            el_outcome = Outcome::NoSolution;
                        } catch (const ConvergenceError&) {
                            el_outcome = Outcome::Failed;
                        }
                    }

                    for (auto method : plan.methods) {
                        MethodTally& t = tally[method];
                        Outcome outcome = el_outcome;
                        double stat = el_stat;
                        double threshold = nominal_threshold;
                        try {
                            if (method == Method::AEL) {
                                stat = solve_dual(adjust(psi, plan.policy)).stat;
                                outcome = Outcome::Ok;
                            } else if (method == Method::EB) {
                                threshold = corrected_threshold(estimate_bartlett(psi), k, alpha);
                            } else if (method == Method::TB) {
                                threshold = nominal_threshold *
                                            BartlettFactor::supplied(*plan.tb_constant, rows).scale();
                            }
                        } catch (const ConvergenceError&) {
                            outcome = Outcome::Failed;
                        } catch (const InputError&) {
                            outcome = Outcome::Failed;
                        } catch (const ConfigError&) {
                            outcome = Outcome::Failed;
                        }

                        bool covered = false;
                        bool counted = true;
                        switch (outcome) {
                            case Outcome::Ok: covered = stat <= threshold; break;
                            case Outcome::NoSolution:
                                ++t.nosolution;
                                counted = plan.nosolution_as_noncoverage;
                                stat = inf;
                                break;
                            case Outcome::Failed:
                                ++t.failures;
                                stat = inf;
                                break;
                        }
                        if (counted) {
                            ++t.used;
                            t.covered += covered ? 1 : 0;
                        }
                        if (plan.keep_replications) {
                            t.stats.push_back(stat);
                            t.indicators.push_back(covered ? 1 : 0);
                        }
                    }
                    ++done;
                    if (progress) progress(done, total);
                }

                for (auto method : plan.methods) {
                    MethodTally& t = tally[method];
                    CoverageCell cell;
                    cell.family = plan.family;
                    cell.n = n;
                    cell.noise = noise;
                    cell.param = param;
                    cell.method = method;
                    cell.replications = t.used;
                    cell.covered = t.covered;
                    cell.coverage = t.used > 0 ? static_cast<double>(t.covered) / t.used : 0.0;
                    cell.se = t.used > 0 ? std::sqrt(cell.coverage * (1.0 - cell.coverage) / t.used) : 0.0;
                    cell.nosolution_count = t.nosolution;
                    cell.failure_count = t.failures;
                    cell.stats = std::move(t.stats);
                    cell.indicators = std::move(t.indicators);
                    report.cells.push_back(std::move(cell));
                }
                ++cell_index;
            }
        }
    }
    return report;
}

PairedSummary paired_summary(const CoverageReport& report) {
    PairedSummary summary;
    const double nominal = report.plan.nominal;
    std::vector<std::tuple<std::size_t, NoiseKind, std::vector<double>>> keys;
    for (const auto& c : report.cells) {
        auto key = std::make_tuple(c.n, c.noise, c.param);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [n, noise, param] : keys) {
        PairedRow row;
        row.n = n;
        row.noise = noise;
        row.param = param;
        if (const auto* el = report.find(n, noise, param, Method::EL)) row.el = el->coverage;
        if (const auto* ael = report.find(n, noise, param, Method::AEL)) row.ael = ael->coverage;
        if (row.el && row.ael) {
            row.difference = *row.ael - *row.el;
            row.ael_closer = std::abs(*row.ael - nominal) < std::abs(*row.el - nominal);
            summary.ael_closer_count += row.ael_closer ? 1 : 0;
        } else {
            row.incomplete = true;
            ++summary.incomplete_count;
        }
        summary.rows.push_back(std::move(row));
    }
    return summary;
}

ExperimentPlan parse_plan(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("plan file: ") + e.what());
    }

    static const std::set<std::string> known = {
        "model", "params", "sizes", "noise", "replications", "nominal", "methods", "seed",
        "adjustment", "trim", "tb_constant", "centering", "frequencies", "nosolution"};
    for (const auto& [key, node] : tree) {
        if (!node.empty()) throw ConfigError("plan file: sections are not supported ('" + key + "')");
        if (known.count(key) == 0) throw ConfigError("plan file: unknown field '" + key + "'");
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(key)) return trim(*v);
        return std::nullopt;
    };

    ExperimentPlan plan;
    const auto model = get("model");
    if (!model) throw ConfigError("plan field 'model' is required");
    plan.family = parse_family(*model);

    const auto params = get("params");
    if (!params) throw ConfigError("plan field 'params' is required");
    for (const auto& point : split(*params, ',')) {
        std::vector<double> p;
        for (const auto& comp : split(point, ':')) p.push_back(parse_double(comp, "params"));
        plan.params.push_back(std::move(p));
    }

    const auto sizes = get("sizes");
    if (!sizes) throw ConfigError("plan field 'sizes' is required");
    for (const auto& s : split(*sizes, ',')) {
        const long long v = parse_integer(s, "sizes");
        if (v < 4) throw ConfigError("plan field 'sizes': sizes must be >= 4");
        plan.sample_sizes.push_back(static_cast<std::size_t>(v));
    }

    if (const auto noise = get("noise")) {
        plan.noises.clear();
        for (const auto& s : split(*noise, ',')) plan.noises.push_back(parse_noise(s));
    }
    if (const auto r = get("replications")) {
        plan.replications = static_cast<int>(parse_integer(*r, "replications"));
    }
    if (const auto nominal = get("nominal")) plan.nominal = parse_double(*nominal, "nominal");
    if (const auto methods = get("methods")) {
        plan.methods.clear();
        for (const auto& s : split(*methods, ',')) {
            try {
                plan.methods.push_back(parse_method(s));
            } catch (const InputError& e) {
                throw ConfigError(std::string("plan field 'methods': ") + e.what());
            }
        }
    }
    if (const auto seed = get("seed")) {
        const long long v = parse_integer(*seed, "seed");
        if (v < 0) throw ConfigError("plan field 'seed' must be nonnegative");
        plan.seed = static_cast<std::uint64_t>(v);
    }
    if (const auto adj = get("adjustment")) {
        const std::string a = lowercase(*adj);
        if (a == "halflog" || a == "log(n)/2") {
            plan.policy = AdjustmentPolicy::half_log();
        } else if (a == "maxhalflog" || a == "max(1,log(n)/2)") {
            plan.policy = AdjustmentPolicy::max_one_half_log();
        } else if (a == "none") {
            plan.policy = AdjustmentPolicy::none();
        } else if (a.rfind("constant:", 0) == 0) {
            plan.policy = AdjustmentPolicy::fixed(parse_double(a.substr(9), "adjustment"));
        } else {
            throw ConfigError("plan field 'adjustment': unknown rule '" + *adj + "'");
        }
    }
    if (const auto t = get("trim")) {
        const std::string v = lowercase(*t);
        if (v != "true" && v != "false") throw ConfigError("plan field 'trim' must be true or false");
        plan.policy.trim = v == "true";
    }
    if (const auto tb = get("tb_constant")) plan.tb_constant = parse_double(*tb, "tb_constant");
    if (const auto c = get("centering")) {
        const std::string v = lowercase(*c);
        if (v == "exact") plan.centering = NoiseCentering::ExactMean;
        else if (v == "sample") plan.centering = NoiseCentering::SampleMean;
        else throw ConfigError("plan field 'centering' must be exact or sample");
    }
    if (const auto f = get("frequencies")) {
        const std::string v = lowercase(*f);
        if (v == "full") plan.frequencies = FrequencyRange::Full;
        else if (v == "half") plan.frequencies = FrequencyRange::HalfBand;
        else throw ConfigError("plan field 'frequencies' must be full or half");
    }
    if (const auto ns = get("nosolution")) {
        const std::string v = lowercase(*ns);
        if (v == "noncoverage") plan.nosolution_as_noncoverage = true;
        else if (v == "exclude") plan.nosolution_as_noncoverage = false;
        else throw ConfigError("plan field 'nosolution' must be noncoverage or exclude");
    }
    validate(plan);
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open plan file '" + path + "'");
    return parse_plan(in);
}

void write_coverage_csv(std::ostream& out, const CoverageReport& report) {
    out << "model,n,noise,param,method,coverage,se,nosolution_count,replications,failure_count\n";
    for (const auto& c : report.cells) {
        out << to_string(c.family) << ',' << c.n << ',' << to_string(c.noise) << ','
            << format_param(c.param) << ',' << to_string(c.method) << ',' << std::fixed
            << std::setprecision(6) << c.coverage << ',' << c.se << std::defaultfloat << ','
            << c.nosolution_count << ',' << c.replications << ',' << c.failure_count << '\n';
    }
}

}  // namespace aelts
