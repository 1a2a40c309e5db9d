#pragma once

#include "aelts/arma_model.hpp"
#include "aelts/el_core.hpp"
#include "aelts/nelder_mead.hpp"
#include "aelts/periodogram.hpp"
#include "aelts/psi_matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace aelts {

// -sum_j ln g_j - sum_j I_j / g_j over the retained ordinates.
double whittle_loglik(const Periodogram& pg, const ArmaSpec& spec);

struct ProfileLikelihood {
    double value = 0.0;
    // sigma2_hat = n^{-1} sum_j I_j / g1_j, the maximizer of whittle_loglik over
    // sigma2 at fixed (phi, theta). With it, value equals that maximum exactly.
    double sigma2 = 0.0;
};

// -n ln(n^{-1} sum I_j/g1_j) - sum ln g1_j - n, with g1 = g / sigma2.
ProfileLikelihood profile_loglik(const Periodogram& pg, ArmaOrder order,
                                 const Eigen::VectorXd& beta1);

// Rows (I_j/g_j - 1) d ln g_j / d(phi, theta, sigma2).
PsiMatrix psi_full(const Periodogram& pg, const ArmaSpec& spec);

// Rows (I_j/g1_j) [d ln g1_j / d(phi, theta) - mean over the n data rows].
PsiMatrix psi_profile(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& beta1);

// Amount by which params leave the stationarity/invertibility region (and,
// for full vectors, sigma2 > 0). Zero inside.
double region_violation(ArmaOrder order, const Eigen::VectorXd& params, bool profile);

struct FitOptions {
    bool profile = true;
    std::optional<Eigen::VectorXd> init;
    NelderMeadOptions simplex = {};
    int newton_polish_steps = 20;
    // Seeds the jitter of the extra starting points.
    std::uint64_t start_seed = 0x5eed;
};

struct WhittleFit {
    Eigen::VectorXd estimate;  // (phi, theta) or (phi, theta, sigma2)
    double loglik = 0.0;
    double sigma2 = 0.0;       // profile sigma2_hat, or the fitted sigma2
    bool converged = false;
    int iterations = 0;
    int starts = 0;
};

/**
 * Whittle estimator by Nelder-Mead with a boundary penalty, followed by a few
 * Newton steps on the score (column sums of psi) to tighten the first-order
 * condition. Models with two or more coefficients use five starts (origin
 * plus four fixed jittered points) unless `init` is given.
 */
WhittleFit whittle_fit(const Periodogram& pg, ArmaOrder order, const FitOptions& options = {});

struct SandwichDiag {
    Eigen::MatrixXd A_hat;
    Eigen::MatrixXd Sigma_hat;
    Eigen::MatrixXd V_hat;
    double a_condition = 0.0;
};

/**
 * A_hat = m^{-1} sum_j d psi_j / d params' by central differences (step 1e-6
 * relative), Sigma_hat = m^{-1} sum_j psi_j psi_j', V_hat = A^{-1} Sigma A'^{-1},
 * over the m rows of the psi matrix after `policy` is applied.
 * Throws SingularMatrixError when A_hat cannot be inverted.
 */
SandwichDiag sandwich(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                      bool profile,
                      const AdjustmentPolicy& policy = AdjustmentPolicy::max_one_half_log());

// Psi matrix for params, adjusted by policy; the building block of sandwich().
PsiMatrix psi_at(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                 bool profile, const AdjustmentPolicy& policy);

}  // namespace aelts
