#include "aelts/bartlett.hpp"

#include "aelts/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

namespace aelts {

BartlettFactor::BartlettFactor(double b, BartlettSource source, std::size_t n)
    : b_(b), source_(source), n_(n) {
    if (n == 0) throw ConfigError("Bartlett factor needs a positive sample size");
    if (!std::isfinite(b) || !(scale() > 0.0)) {
        throw ConfigError("Bartlett factor must satisfy 1 + b/n > 0");
    }
}

BartlettFactor estimate_bartlett(const PsiMatrix& psi) {
    if (psi.adjusted) throw UsageError("Bartlett estimate needs an unadjusted psi matrix");
    if (psi.dim() != 1) throw InputError("Bartlett estimate is defined for a scalar parameter only");
    const Eigen::Index n = psi.size();
    if (n < 2) throw InputError("Bartlett estimate needs at least two rows");

    const Eigen::ArrayXd centred = psi.rows.col(0).array() - psi.rows.col(0).mean();
    const double nd = static_cast<double>(n);
    const double mu2 = centred.square().sum() / nd;
    const double mu3 = centred.cube().sum() / nd;
    const double mu4 = centred.square().square().sum() / nd;
    if (mu2 < 1e-12) throw InputError("Bartlett estimate is degenerate: psi has no spread");

    const double b = mu4 / (2.0 * mu2 * mu2) - mu3 * mu3 / (3.0 * mu2 * mu2 * mu2);
    return {b, BartlettSource::Estimated, static_cast<std::size_t>(n)};
}

double chi_square_quantile(int k, double alpha) {
    if (k < 1) throw ConfigError("chi-square degrees of freedom must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    const boost::math::chi_squared dist(static_cast<double>(k));
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

double corrected_threshold(const BartlettFactor& factor, int k, double alpha) {
    return chi_square_quantile(k, alpha) * factor.scale();
}

double corrected_threshold(const BartlettFactor& factor, int k, double alpha, std::size_t n) {
    return corrected_threshold(BartlettFactor(factor.b(), factor.source(), n), k, alpha);
}

}  // namespace aelts
