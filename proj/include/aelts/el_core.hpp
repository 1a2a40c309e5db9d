#pragma once

#include "aelts/arma_model.hpp"
#include "aelts/periodogram.hpp"
#include "aelts/psi_matrix.hpp"

#include <Eigen/Dense>

#include <string>

namespace aelts {

/**
 * How the pseudo-observation constant a_n is chosen from the number n of
 * data rows. Every rule is capped at n/2 so that a_n = o(n).
 *
 * With `trim` set, each psi column is winsorized at its empirical 1st/99th
 * percentiles before the mean that defines the pseudo-observation is taken.
 */
struct AdjustmentPolicy {
    enum class Rule { MaxOneHalfLog, HalfLog, None, Constant };

    Rule rule = Rule::MaxOneHalfLog;
    double constant = 0.0;
    bool trim = false;

    static AdjustmentPolicy max_one_half_log() { return {Rule::MaxOneHalfLog}; }
    static AdjustmentPolicy half_log() { return {Rule::HalfLog}; }
    static AdjustmentPolicy none() { return {Rule::None}; }
    static AdjustmentPolicy fixed(double c) { return {Rule::Constant, c}; }

    [[nodiscard]] double value(Eigen::Index n) const;
    [[nodiscard]] std::string describe() const;
};

// Appends -a_n * psi_bar as a final row. Policy None returns the input.
// Throws UsageError if psi is already adjusted.
PsiMatrix adjust(const PsiMatrix& psi, const AdjustmentPolicy& policy);

struct ElSolution {
    Eigen::VectorXd xi;
    Eigen::VectorXd weights;
    double stat = 0.0;
    bool converged = false;
    double residual = 0.0;  // || sum_j p_j psi_j ||
    int inner_iterations = 0;
};

struct DualOptions {
    double tolerance = 1e-9;  // on the constraint residual, relative to max(1, max row norm)
    int max_iterations = 100;
    int stall_limit = 10;
};

/**
 * Minimizes the convex dual -sum_j log(1 + xi' psi_j) by damped Newton from
 * xi = 0, keeping 1 + xi' psi_j >= 1/m throughout.
 *
 * Throws NoSolutionError when zero is not an interior point of the convex
 * hull of the rows (the dual is unbounded), and ConvergenceError when the
 * iteration budget runs out on a problem that does have a solution.
 */
ElSolution solve_dual(const PsiMatrix& psi, const DualOptions& options = {});

// Whether the rows admit the certificate xi' psi_j >= 0 for all j with at least
// one strict inequality, i.e. zero is not interior to their convex hull.
bool separates_origin(const Eigen::MatrixXd& rows, const Eigen::VectorXd& xi);

struct StatOptions {
    bool adjusted = true;
    bool profile = true;
    AdjustmentPolicy policy = AdjustmentPolicy::max_one_half_log();
    DualOptions dual = {};
};

/**
 * EL (adjusted=false) or AEL ratio statistic at `params`. With profile set,
 * params holds (phi, theta) and psi_profile is used; otherwise params holds
 * (phi, theta, sigma2) and psi_full is used.
 */
ElSolution el_stat(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                   const StatOptions& options);

}  // namespace aelts
