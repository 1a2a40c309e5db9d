#pragma once

#include "aelts/psi_matrix.hpp"

#include <cstddef>

namespace aelts {

enum class BartlettSource { Estimated, Supplied };

// Correction b for a sample of n estimating-function rows: the chi-square
// threshold is scaled by (1 + b/n). Construction rejects 1 + b/n <= 0.
class BartlettFactor {
public:
    BartlettFactor(double b, BartlettSource source, std::size_t n);

    static BartlettFactor supplied(double b, std::size_t n) {
        return {b, BartlettSource::Supplied, n};
    }

    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] BartlettSource source() const noexcept { return source_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double scale() const noexcept { return 1.0 + b_ / static_cast<double>(n_); }

private:
    double b_;
    BartlettSource source_;
    std::size_t n_;
};

/**
 * Estimated Bartlett factor for a scalar EL statistic from the central
 * moments of the psi values,
 *
 *   b = mu4 / (2 mu2^2) - mu3^2 / (3 mu2^3),   mu_r = n^{-1} sum (psi_j - psi_bar)^r,
 *
 * the smooth-function-model estimate of DiCiccio, Hall and Romano (1991).
 * Requires an unadjusted single-column psi; throws InputError when mu2 < 1e-12.
 */
BartlettFactor estimate_bartlett(const PsiMatrix& psi);

// Upper 1 - alpha quantile of chi-square with k degrees of freedom.
double chi_square_quantile(int k, double alpha);

// chi2_{k,1-alpha} * (1 + b/n).
double corrected_threshold(const BartlettFactor& factor, int k, double alpha);
double corrected_threshold(const BartlettFactor& factor, int k, double alpha, std::size_t n);

}  // namespace aelts
