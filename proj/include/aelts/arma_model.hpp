#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace aelts {

struct ArmaOrder {
    int p = 0;
    int q = 0;

    [[nodiscard]] int profile_dim() const noexcept { return p + q; }
    [[nodiscard]] int full_dim() const noexcept { return p + q + 1; }
    friend bool operator==(const ArmaOrder&, const ArmaOrder&) = default;
};

/**
 * ARMA(p,q) model phi(B) Z_t = theta(B) a_t with
 *   phi(B)   = 1 - phi_1 B - ... - phi_p B^p
 *   theta(B) = 1 - theta_1 B - ... - theta_q B^q
 *
 * Note the minus sign on the MA side: coefficients imported from tools that
 * write theta(B) = 1 + theta_1 B + ... must be negated.
 *
 * The full parameter vector is (phi_1..phi_p, theta_1..theta_q, sigma2); the
 * profile vector drops sigma2.
 */
struct ArmaSpec {
    std::vector<double> ar;
    std::vector<double> ma;
    double sigma2 = 1.0;

    [[nodiscard]] ArmaOrder order() const noexcept {
        return {static_cast<int>(ar.size()), static_cast<int>(ma.size())};
    }
    [[nodiscard]] Eigen::VectorXd full_params() const;
    [[nodiscard]] Eigen::VectorXd profile_params() const;

    static ArmaSpec from_full(ArmaOrder order, const Eigen::VectorXd& params);
    static ArmaSpec from_profile(ArmaOrder order, const Eigen::VectorXd& params,
                                 double sigma2 = 1.0);

    static ArmaSpec white_noise(double sigma2 = 1.0) { return {{}, {}, sigma2}; }
    static ArmaSpec ar1(double phi, double sigma2 = 1.0) { return {{phi}, {}, sigma2}; }
    static ArmaSpec ma1(double theta, double sigma2 = 1.0) { return {{}, {theta}, sigma2}; }
    static ArmaSpec arma11(double phi, double theta, double sigma2 = 1.0) {
        return {{phi}, {theta}, sigma2};
    }
};

// Largest modulus among the inverse roots of 1 - c_1 z - ... - c_m z^m, i.e.
// the spectral radius of the companion matrix. Zero for an empty polynomial.
double inverse_root_radius(std::span<const double> coeffs);

inline constexpr double kRootMargin = 1e-8;

bool is_stationary(const ArmaSpec& spec);
bool is_invertible(const ArmaSpec& spec);
bool is_valid(const ArmaSpec& spec);

// Throws DomainError naming the violated condition.
void validate(const ArmaSpec& spec);

// Spectral density and log-density gradient for a spec that has already been
// validated. Construction validates; evaluation is then cheap.
class SpectralModel {
public:
    explicit SpectralModel(ArmaSpec spec);

    [[nodiscard]] const ArmaSpec& spec() const noexcept { return spec_; }

    // g(w) = sigma2/(2 pi) |theta(e^{-iw})|^2 / |phi(e^{-iw})|^2
    [[nodiscard]] double density(double omega) const;

    // Same without sigma2: g1(w) = g(w)/sigma2.
    [[nodiscard]] double unit_density(double omega) const;

    // d ln g / d(phi, theta, sigma2), or d ln g1 / d(phi, theta) when profile.
    [[nodiscard]] Eigen::VectorXd log_gradient(double omega, bool profile) const;

private:
    ArmaSpec spec_;
};

double spectral_density(const ArmaSpec& spec, double omega);
Eigen::VectorXd log_spectral_gradient(const ArmaSpec& spec, double omega, bool profile);

enum class NoiseKind {
    StandardNormal,
    CenteredChiSq5,  // chi-square(5) - 5, variance 10
};

// Variance of one unscaled draw of the given noise kind.
double noise_variance(NoiseKind kind);

enum class NoiseCentering {
    ExactMean,   // subtract the distribution mean (0 or 5)
    SampleMean,  // also subtract the sample mean of the innovations in the returned window
};

class TimeSeries {
public:
    static constexpr std::size_t kMinLength = 4;

    explicit TimeSeries(std::vector<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
    double mean_;
};

struct SimulationOptions {
    NoiseKind noise = NoiseKind::StandardNormal;
    NoiseCentering centering = NoiseCentering::ExactMean;
};

// Presample steps discarded before the returned window.
std::size_t burn_in_length(ArmaOrder order);

// Innovations are sqrt(sigma2) times draws of `noise`. The recursion starts at
// zero and runs burn_in_length() steps before the first returned value.
TimeSeries simulate(const ArmaSpec& spec, std::size_t length, std::uint64_t seed,
                    const SimulationOptions& options = {});

}  // namespace aelts
