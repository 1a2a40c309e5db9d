#pragma once

#include "aelts/arma_model.hpp"
#include "aelts/confidence.hpp"
#include "aelts/el_core.hpp"
#include "aelts/periodogram.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aelts {

enum class ModelFamily { MA1, AR1, ARMA11 };

std::string_view to_string(ModelFamily family);
ModelFamily parse_family(std::string_view text);
ArmaOrder order_of(ModelFamily family);
std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise(std::string_view text);

struct ExperimentPlan {
    ModelFamily family = ModelFamily::MA1;
    // Each entry holds the profile parameters (phi and/or theta) of one cell.
    std::vector<std::vector<double>> params;
    std::vector<std::size_t> sample_sizes;
    std::vector<NoiseKind> noises = {NoiseKind::StandardNormal};
    int replications = 1000;
    double nominal = 0.90;
    std::vector<Method> methods = {Method::EL, Method::AEL};
    std::uint64_t seed = 1;
    AdjustmentPolicy policy = AdjustmentPolicy::half_log();
    std::optional<double> tb_constant;
    NoiseCentering centering = NoiseCentering::ExactMean;
    FrequencyRange frequencies = FrequencyRange::Full;
    // Whether an EL solve without solution counts as non-coverage. When false
    // such replications are dropped from that method's denominator.
    bool nosolution_as_noncoverage = true;
    // Keep per-replication statistics and indicators in the report.
    bool keep_replications = false;
};

// Throws ConfigError naming the offending field.
void validate(const ExperimentPlan& plan);

struct CoverageCell {
    ModelFamily family = ModelFamily::MA1;
    std::size_t n = 0;
    NoiseKind noise = NoiseKind::StandardNormal;
    std::vector<double> param;
    Method method = Method::AEL;
    int replications = 0;  // denominator actually used
    int covered = 0;
    double coverage = 0.0;
    double se = 0.0;
    int nosolution_count = 0;
    int failure_count = 0;
    // Filled when plan.keep_replications: statistic per replication (+inf when
    // undefined) and the coverage indicator.
    std::vector<double> stats;
    std::vector<std::uint8_t> indicators;
};

struct CoverageReport {
    ExperimentPlan plan;
    std::vector<CoverageCell> cells;

    [[nodiscard]] const CoverageCell* find(std::size_t n, NoiseKind noise,
                                           const std::vector<double>& param, Method method) const;
};

// Per-replication seed derived from (base seed, cell index, replication index).
std::uint64_t replication_seed(std::uint64_t base, std::size_t cell, std::size_t replication);

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/**
 * For every (param, n, noise) cell, simulates R series at the true parameter
 * and evaluates each requested method's statistic at that parameter. All
 * methods see the same series within a replication. Replication failures are
 * counted, never thrown.
 */
CoverageReport run_coverage(const ExperimentPlan& plan, const ProgressCallback& progress = {});

struct PairedRow {
    std::size_t n = 0;
    NoiseKind noise = NoiseKind::StandardNormal;
    std::vector<double> param;
    std::optional<double> el;
    std::optional<double> ael;
    std::optional<double> difference;  // ael - el
    bool ael_closer = false;
    bool incomplete = false;
};

struct PairedSummary {
    std::vector<PairedRow> rows;
    int ael_closer_count = 0;
    int incomplete_count = 0;
};

PairedSummary paired_summary(const CoverageReport& report);

/**
 * Plan files are INI-style key = value lines (# comments) with keys
 *   model, params, sizes, noise, replications, nominal, methods, seed,
 *   adjustment, tb_constant, centering, frequencies, nosolution
 * documented in docs/plan_format.md. Throws ConfigError naming the field.
 */
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan(const std::string& path);

// CSV with columns model,n,noise,param,method,coverage,se,nosolution_count,
// replications,failure_count. Deterministic for a fixed plan.
void write_coverage_csv(std::ostream& out, const CoverageReport& report);

}  // namespace aelts
