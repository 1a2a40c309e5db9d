#pragma once

#include "aelts/arma_model.hpp"
#include "aelts/bartlett.hpp"
#include "aelts/el_core.hpp"
#include "aelts/periodogram.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aelts {

// EL: unadjusted; AEL: adjusted; EB/TB: unadjusted with an estimated or a
// supplied Bartlett-scaled threshold.
enum class Method { EL, AEL, EB, TB };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);  // case-insensitive; throws InputError

enum class NodeStatus { Ok, NoSolution, Failed };

std::string_view to_string(NodeStatus status);

struct RegionOptions {
    Method method = Method::AEL;
    double alpha = 0.1;
    AdjustmentPolicy policy = AdjustmentPolicy::max_one_half_log();
    std::optional<double> tb_constant;
    DualOptions dual = {};
};

struct MethodEvaluation {
    NodeStatus status = NodeStatus::Failed;
    double stat = 0.0;       // NaN unless status == Ok
    double threshold = 0.0;  // possibly Bartlett-scaled chi-square quantile
    std::string message;

    [[nodiscard]] bool covered() const noexcept { return status == NodeStatus::Ok && stat <= threshold; }
};

// The profile statistic of `method` at beta1 and its decision threshold. Solver
// failures are reported in the status, never thrown.
MethodEvaluation evaluate_method(const Periodogram& pg, ArmaOrder order,
                                 const Eigen::VectorXd& beta1, const RegionOptions& options);

// `steps` equally spaced nodes from lo to hi inclusive.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int steps = 2;

    [[nodiscard]] double at(int i) const;
};

struct RegionGrid {
    std::vector<Axis> axes;
    std::vector<double> stat;
    std::vector<double> threshold;
    std::vector<NodeStatus> status;
    double nominal_threshold = 0.0;
    Method method = Method::AEL;
    double alpha = 0.1;
    ArmaOrder order;

    // Nodes are stored with the first axis varying fastest.
    [[nodiscard]] std::size_t size() const noexcept { return stat.size(); }
    [[nodiscard]] Eigen::VectorXd node(std::size_t index) const;
    [[nodiscard]] bool inside(std::size_t index) const;
    // stat rescaled so that it is compared against nominal_threshold at every
    // node; identical to stat unless the threshold varies (EB).
    [[nodiscard]] double calibrated(std::size_t index) const;
};

// Throws DomainError if any node leaves the stationarity/invertibility region.
RegionGrid scan_region(const Periodogram& pg, ArmaOrder order, const std::vector<Axis>& box,
                       const RegionOptions& options);

enum class EndKind {
    Crossing,   // the statistic crosses the threshold here
    Truncated,  // search bound reached while still inside the region
    Undefined,  // the statistic stops being defined here (EL with no solution)
};

std::string_view to_string(EndKind kind);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double estimate = 0.0;
    bool contains_estimate = false;
    EndKind lo_kind = EndKind::Crossing;
    EndKind hi_kind = EndKind::Crossing;
    double threshold = 0.0;
};

struct IntervalSearch {
    double lower_bound = -1.0 + 1e-6;
    double upper_bound = 1.0 - 1e-6;
    double initial_step = 0.02;
    double tolerance = 1e-8;
};

/**
 * Confidence interval for a one-parameter model: walks outward from the
 * estimate in growing steps until the statistic exceeds its threshold, then
 * bisects the bracket to `tolerance`. Uses the profile Whittle estimate when
 * `estimate` is not given.
 */
Interval interval_1d(const Periodogram& pg, ArmaOrder order, const RegionOptions& options,
                     const IntervalSearch& search = {},
                     std::optional<double> estimate = std::nullopt);

struct Polyline {
    std::vector<Eigen::Vector2d> points;
    bool closed = false;
};

/**
 * Level set {calibrated stat = nominal threshold} of a two-axis grid by
 * marching squares with linear interpolation. The grid is padded with an
 * outside ring, so regions that reach the box are closed along its edge.
 * Cells touching a node without a defined statistic are skipped, which leaves
 * open polylines around undefined areas.
 */
std::vector<Polyline> extract_contour(const RegionGrid& grid);

// Shoelace area of a closed polyline (absolute value).
double polygon_area(const Polyline& poly);

// Nonzero winding number test.
bool polygon_contains(const Polyline& poly, const Eigen::Vector2d& point);

}  // namespace aelts
