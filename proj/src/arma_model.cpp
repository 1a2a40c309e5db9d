#include "aelts/arma_model.hpp"

#include "aelts/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

namespace aelts {

namespace {

using cd = std::complex<double>;

// 1 - c_1 z - ... - c_m z^m evaluated at z.
cd lag_polynomial(std::span<const double> coeffs, cd z) {
    cd value = 1.0;
    cd power = 1.0;
    for (double c : coeffs) {
        power *= z;
        value -= c * power;
    }
    return value;
}

// d|P(z)|^2 / dc_k = 2 Re(-z^k conj(P(z))), written into out[0..m).
void squared_modulus_gradient(std::span<const double> coeffs, cd z, cd poly,
                              Eigen::Ref<Eigen::VectorXd> out) {
    cd power = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        power *= z;
        out[static_cast<Eigen::Index>(k)] = -2.0 * std::real(power * std::conj(poly));
    }
}

}  // namespace

Eigen::VectorXd ArmaSpec::full_params() const {
    const auto [p, q] = order();
    Eigen::VectorXd out(p + q + 1);
    for (int i = 0; i < p; ++i) out[i] = ar[static_cast<std::size_t>(i)];
    for (int i = 0; i < q; ++i) out[p + i] = ma[static_cast<std::size_t>(i)];
    out[p + q] = sigma2;
    return out;
}

Eigen::VectorXd ArmaSpec::profile_params() const {
    return full_params().head(order().profile_dim());
}

ArmaSpec ArmaSpec::from_full(ArmaOrder order, const Eigen::VectorXd& params) {
    if (params.size() != order.full_dim()) {
        throw InputError("full parameter vector has wrong length for the ARMA order");
    }
    return from_profile(order, params.head(order.profile_dim()), params[order.profile_dim()]);
}

ArmaSpec ArmaSpec::from_profile(ArmaOrder order, const Eigen::VectorXd& params, double sigma2) {
    if (order.p < 0 || order.q < 0 || params.size() != order.profile_dim()) {
        throw InputError("profile parameter vector has wrong length for the ARMA order");
    }
    ArmaSpec spec;
    spec.ar.assign(params.data(), params.data() + order.p);
    spec.ma.assign(params.data() + order.p, params.data() + order.p + order.q);
    spec.sigma2 = sigma2;
    return spec;
}

double inverse_root_radius(std::span<const double> coeffs) {
    const auto m = static_cast<Eigen::Index>(coeffs.size());
    if (m == 0) return 0.0;
    if (m == 1) return std::abs(coeffs[0]);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) companion(0, k) = coeffs[static_cast<std::size_t>(k)];
    companion.diagonal(-1).setOnes();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const ArmaSpec& spec) {
    for (double c : spec.ar) {
        if (!std::isfinite(c)) return false;
    }
    return inverse_root_radius(spec.ar) < 1.0 - kRootMargin;
}

bool is_invertible(const ArmaSpec& spec) {
    for (double c : spec.ma) {
        if (!std::isfinite(c)) return false;
    }
    return inverse_root_radius(spec.ma) < 1.0 - kRootMargin;
}

bool is_valid(const ArmaSpec& spec) {
    return spec.sigma2 > 0.0 && std::isfinite(spec.sigma2) && is_stationary(spec) &&
           is_invertible(spec);
}

void validate(const ArmaSpec& spec) {
    if (!(spec.sigma2 > 0.0) || !std::isfinite(spec.sigma2)) {
        throw DomainError("innovation variance must be positive and finite");
    }
    if (!is_stationary(spec)) {
        std::ostringstream msg;
        msg << "AR polynomial is not stationary (inverse root radius "
            << inverse_root_radius(spec.ar) << ")";
        throw DomainError(msg.str());
    }
    if (!is_invertible(spec)) {
        std::ostringstream msg;
        msg << "MA polynomial is not invertible (inverse root radius "
            << inverse_root_radius(spec.ma) << ")";
        throw DomainError(msg.str());
    }
}

SpectralModel::SpectralModel(ArmaSpec spec) : spec_(std::move(spec)) { validate(spec_); }

double SpectralModel::unit_density(double omega) const {
    const cd z = std::polar(1.0, -omega);
    const double num = std::norm(lag_polynomial(spec_.ma, z));
    const double den = std::norm(lag_polynomial(spec_.ar, z));
    return num / (den * 2.0 * std::numbers::pi);
}

double SpectralModel::density(double omega) const { return spec_.sigma2 * unit_density(omega); }

Eigen::VectorXd SpectralModel::log_gradient(double omega, bool profile) const {
    const auto [p, q] = spec_.order();
    Eigen::VectorXd grad(profile ? p + q : p + q + 1);
    const cd z = std::polar(1.0, -omega);

    const cd phi = lag_polynomial(spec_.ar, z);
    squared_modulus_gradient(spec_.ar, z, phi, grad.head(p));
    grad.head(p) /= -std::norm(phi);

    const cd theta = lag_polynomial(spec_.ma, z);
    squared_modulus_gradient(spec_.ma, z, theta, grad.segment(p, q));
    grad.segment(p, q) /= std::norm(theta);

    if (!profile) grad[p + q] = 1.0 / spec_.sigma2;
    return grad;
}

double spectral_density(const ArmaSpec& spec, double omega) {
    return SpectralModel(spec).density(omega);
}

Eigen::VectorXd log_spectral_gradient(const ArmaSpec& spec, double omega, bool profile) {
    return SpectralModel(spec).log_gradient(omega, profile);
}

double noise_variance(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::StandardNormal: return 1.0;
        case NoiseKind::CenteredChiSq5: return 10.0;
    }
    return 1.0;
}

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < kMinLength) {
        std::ostringstream msg;
        msg << "time series needs at least " << kMinLength << " observations, got "
            << values_.size();
        throw InputError(msg.str());
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InputError("time series contains a non-finite value");
    }
    mean_ = std::accumulate(values_.begin(), values_.end(), 0.0) /
            static_cast<double>(values_.size());
}

std::size_t burn_in_length(ArmaOrder order) {
    return 500 + 10 * static_cast<std::size_t>(order.p + order.q);
}

TimeSeries simulate(const ArmaSpec& spec, std::size_t length, std::uint64_t seed,
                    const SimulationOptions& options) {
    validate(spec);
    if (length < TimeSeries::kMinLength) {
        throw InputError("simulated series length must be at least 4");
    }
    const std::size_t burn = burn_in_length(spec.order());
    const std::size_t total = burn + length;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> innov(total);
    for (auto& a : innov) {
        if (options.noise == NoiseKind::StandardNormal) {
            a = normal(rng);
        } else {
            double chi2 = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double u = normal(rng);
                chi2 += u * u;
            }
            a = chi2 - 5.0;
        }
    }
    if (options.centering == NoiseCentering::SampleMean) {
        // Mean of the innovations that drive the returned window.
        const auto window = innov.begin() + static_cast<std::ptrdiff_t>(burn);
        const double m = std::accumulate(window, innov.end(), 0.0) / static_cast<double>(length);
        for (auto& a : innov) a -= m;
    }
    const double scale = std::sqrt(spec.sigma2);
    for (auto& a : innov) a *= scale;

    std::vector<double> z(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = innov[t];
        for (std::size_t k = 1; k <= spec.ar.size() && k <= t; ++k) v += spec.ar[k - 1] * z[t - k];
        for (std::size_t k = 1; k <= spec.ma.size() && k <= t; ++k) v -= spec.ma[k - 1] * innov[t - k];
        z[t] = v;
    }
    return TimeSeries(std::vector<double>(z.begin() + static_cast<std::ptrdiff_t>(burn), z.end()));
}

}  // namespace aelts
