#include "aelts/el_core.hpp"

#include "aelts/error.hpp"
#include "aelts/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace aelts {

namespace {

// Linear-interpolation empirical quantile of a sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double prob) {
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Eigen::VectorXd pseudo_mean(const Eigen::MatrixXd& rows, bool trim) {
    if (!trim) return rows.colwise().mean().transpose();
    Eigen::VectorXd out(rows.cols());
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        std::vector<double> col(rows.col(c).data(), rows.col(c).data() + rows.rows());
        std::vector<double> sorted = col;
        std::sort(sorted.begin(), sorted.end());
        const double lo = sorted_quantile(sorted, 0.01);
        const double hi = sorted_quantile(sorted, 0.99);
        double sum = 0.0;
        for (double v : col) sum += std::clamp(v, lo, hi);
        out[c] = sum / static_cast<double>(col.size());
    }
    return out;
}

double dual_objective(const Eigen::VectorXd& denom) { return -denom.array().log().sum(); }

}  // namespace

double AdjustmentPolicy::value(Eigen::Index n) const {
    const double nd = static_cast<double>(n);
    double a = 0.0;
    switch (rule) {
        case Rule::None: return 0.0;
        case Rule::MaxOneHalfLog: a = std::max(1.0, std::log(nd) / 2.0); break;
        case Rule::HalfLog: a = std::log(nd) / 2.0; break;
        case Rule::Constant:
            if (!(constant > 0.0) || !std::isfinite(constant)) {
                throw ConfigError("constant adjustment a_n must be positive and finite");
            }
            a = constant;
            break;
    }
    return std::min(a, nd / 2.0);
}

std::string AdjustmentPolicy::describe() const {
    std::string out;
    switch (rule) {
        case Rule::None: out = "none"; break;
        case Rule::MaxOneHalfLog: out = "max(1,log(n)/2)"; break;
        case Rule::HalfLog: out = "log(n)/2"; break;
        case Rule::Constant: {
            std::ostringstream s;
            s << "constant(" << constant << ")";
            out = s.str();
            break;
        }
    }
    if (trim) out += "+trim";
    return out;
}

PsiMatrix adjust(const PsiMatrix& psi, const AdjustmentPolicy& policy) {
    if (psi.adjusted) throw UsageError("psi matrix is already adjusted");
    if (policy.rule == AdjustmentPolicy::Rule::None) return psi;
    const Eigen::Index n = psi.size();
    if (n == 0) throw InputError("cannot adjust an empty psi matrix");

    const double a_n = policy.value(n);
    PsiMatrix out;
    out.rows.resize(n + 1, psi.dim());
    out.rows.topRows(n) = psi.rows;
    out.rows.row(n) = -a_n * pseudo_mean(psi.rows, policy.trim).transpose();
    out.adjusted = true;
    out.a_n = a_n;
    return out;
}

bool separates_origin(const Eigen::MatrixXd& rows, const Eigen::VectorXd& xi) {
    if (rows.rows() == 0 || xi.isZero(0.0)) return false;
    const Eigen::VectorXd proj = rows * xi;
    return proj.minCoeff() >= 0.0 && proj.maxCoeff() > 0.0;
}

ElSolution solve_dual(const PsiMatrix& psi, const DualOptions& options) {
    const Eigen::MatrixXd& rows = psi.rows;
    const Eigen::Index m = rows.rows();
    const Eigen::Index k = rows.cols();
    if (m == 0) throw InputError("psi matrix has no rows");
    if (!rows.allFinite()) throw InputError("psi matrix contains non-finite entries");

    const double md = static_cast<double>(m);
    const double floor = 1.0 / md + 1e-12;
    const double scale = std::max(1.0, rows.rowwise().norm().maxCoeff());
    const double target = options.tolerance * scale;
    // Keep iterating past the acceptance tolerance so the weights sum to one
    // to near machine precision.
    const double polish = 1e-4 * target;

    Eigen::VectorXd xi = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd denom = Eigen::VectorXd::Ones(m);
    double objective = 0.0;

    auto constraint = [&](const Eigen::VectorXd& d) -> Eigen::VectorXd {
        return rows.transpose() * d.cwiseInverse();
    };

    Eigen::VectorXd sum_ratio = constraint(denom);
    double residual = sum_ratio.norm() / md;
    int iter = 0;
    int stalled = 0;
    double prev_residual = residual;

    while (residual > polish && iter < options.max_iterations) {
        ++iter;
        const Eigen::VectorXd inv_d = denom.cwiseInverse();
        const Eigen::MatrixXd weighted = rows.array().colwise() * inv_d.array();
        const Eigen::MatrixXd hessian = weighted.transpose() * weighted;
        const Eigen::VectorXd grad = -sum_ratio;

        Eigen::VectorXd step;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
            ldlt.vectorD().minCoeff() > 1e-14 * ldlt.vectorD().maxCoeff()) {
            step = ldlt.solve(-grad);
        } else {
            step = hessian.completeOrthogonalDecomposition().solve(-grad);
        }
        const double slope = grad.dot(step);
        if (!(slope < 0.0)) break;  // no descent left at working precision

        double t = 1.0;
        bool hit_boundary = false;
        bool accepted = false;
        Eigen::VectorXd trial_xi;
        Eigen::VectorXd trial_d;
        for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
            trial_xi = xi + t * step;
            trial_d = Eigen::VectorXd::Ones(m) + rows * trial_xi;
            if (trial_d.minCoeff() < floor) {
                hit_boundary = true;
                continue;
            }
            if (dual_objective(trial_d) <= objective + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            // Near the optimum the objective change falls below roundoff; a
            // clear drop in the gradient norm is then the usable signal.
            if (constraint(trial_d).norm() / md <= (1.0 - 1e-4 * t) * residual) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (separates_origin(rows, trial_xi)) {
                throw NoSolutionError("zero is not interior to the convex hull of psi rows");
            }
            break;
        }

        xi = trial_xi;
        denom = trial_d;
        objective = dual_objective(denom);
        sum_ratio = constraint(denom);
        residual = sum_ratio.norm() / md;

        if (separates_origin(rows, xi)) {
            throw NoSolutionError("zero is not interior to the convex hull of psi rows");
        }
        if (hit_boundary && residual >= prev_residual) {
            if (++stalled >= options.stall_limit) {
                throw NoSolutionError(
                    "dual unbounded: line search pinned at the feasibility boundary");
            }
        } else {
            stalled = 0;
        }
        prev_residual = residual;
    }

    if (residual > target) {
        std::ostringstream msg;
        msg << "dual solver did not converge (residual " << residual << " after " << iter
            << " iterations)";
        throw ConvergenceError(msg.str(), residual, iter);
    }

    ElSolution sol;
    sol.xi = xi;
    sol.weights = (md * denom).cwiseInverse();
    sol.stat = 2.0 * denom.array().log().sum();
    sol.converged = true;
    sol.residual = residual;
    sol.inner_iterations = iter;
    return sol;
}

ElSolution el_stat(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                   const StatOptions& options) {
    PsiMatrix psi = options.profile ? psi_profile(pg, order, params)
                                    : psi_full(pg, ArmaSpec::from_full(order, params));
    if (options.adjusted) psi = adjust(psi, options.policy);
    return solve_dual(psi, options.dual);
}

}  // namespace aelts
