#pragma once

#include <Eigen/Dense>

#include <functional>

namespace aelts {

struct NelderMeadOptions {
    double initial_step = 0.1;
    double diameter_tolerance = 1e-7;
    int max_iterations = 2000;
};

struct NelderMeadResult {
    Eigen::VectorXd argmin;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Unconstrained Nelder-Mead minimizer with the standard coefficients
// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Converged when
// every vertex lies within diameter_tolerance of the best one.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& options = {});

}  // namespace aelts
