#include "aelts/arma_model.hpp"
#include "aelts/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace aelts;
using aelts::testing::vec;

namespace {

constexpr double kPi = std::numbers::pi;

double simpson_variance(const ArmaSpec& spec, int panels) {
    const SpectralModel model(spec);
    const double h = 2.0 * kPi / panels;
    double sum = model.density(-kPi) + model.density(kPi);
    for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * model.density(-kPi + i * h);
    return sum * h / 3.0;
}

double sample_variance(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST(SpectralDensity, WhiteNoiseIsFlat) {
    EXPECT_NEAR(spectral_density(ArmaSpec::white_noise(), 1.0), 1.0 / (2.0 * kPi), 1e-15);
}

TEST(SpectralDensity, Ma1AtZeroFrequency) {
    EXPECT_NEAR(spectral_density(ArmaSpec::ma1(0.5), 0.0), 0.25 / (2.0 * kPi), 1e-15);
    EXPECT_NEAR(spectral_density(ArmaSpec::ma1(0.5), 0.0), 0.039789, 1e-6);
}

TEST(SpectralDensity, Ar1AtPi) {
    EXPECT_NEAR(spectral_density(ArmaSpec::ar1(0.7), kPi), 1.0 / (2.0 * kPi * 2.89), 1e-15);
    EXPECT_NEAR(spectral_density(ArmaSpec::ar1(0.7), kPi), 0.055071, 1e-6);
}

TEST(SpectralDensity, IntegratesToProcessVariance) {
    struct Case {
        ArmaSpec spec;
        double variance;
    };
    const std::vector<Case> cases = {
        {ArmaSpec::ar1(0.7, 2.0), 2.0 / (1.0 - 0.49)},
        {ArmaSpec::ar1(-0.4), 1.0 / (1.0 - 0.16)},
        {ArmaSpec::ma1(0.5, 1.5), 1.5 * 1.25},
        {ArmaSpec::ma1(-0.9), 1.81},
        {ArmaSpec::arma11(0.6, 0.3), (1.0 - 2 * 0.6 * 0.3 + 0.09) / (1.0 - 0.36)},
    };
    for (const auto& c : cases) {
        EXPECT_NEAR(simpson_variance(c.spec, 4096) / c.variance, 1.0, 1e-6);
    }
}

TEST(SpectralDensity, IsEven) {
    const ArmaSpec spec{{0.5, -0.2}, {0.4}, 1.3};
    for (double w : {0.1, 0.7, 1.9, 3.0}) {
        EXPECT_EQ(spectral_density(spec, w), spectral_density(spec, -w));
    }
}

TEST(LogGradient, Ma1AtZeroCoefficient) {
    for (double w : {0.0, 0.4, 1.3, 2.8}) {
        const Eigen::VectorXd g = log_spectral_gradient(ArmaSpec::ma1(0.0), w, true);
        ASSERT_EQ(g.size(), 1);
        EXPECT_NEAR(g[0], -2.0 * std::cos(w), 1e-14);
    }
}

TEST(LogGradient, Ar1VanishesAtQuarterTurn) {
    const Eigen::VectorXd g = log_spectral_gradient(ArmaSpec::ar1(0.0), kPi / 2.0, true);
    EXPECT_NEAR(g[0], 0.0, 1e-15);
}

TEST(LogGradient, MatchesCentralDifferencesOnFiftyPairs) {
    const std::vector<ArmaSpec> specs = {
        ArmaSpec::ar1(0.7),       ArmaSpec::ma1(0.5),        ArmaSpec::arma11(0.7, 0.5, 2.0),
        ArmaSpec::arma11(-0.3, 0.8), {{0.5, -0.3}, {}, 1.0},  {{0.4}, {0.2, -0.3}, 0.7},
        ArmaSpec::ar1(-0.9, 0.5), ArmaSpec::ma1(-0.6, 3.0),  {{0.2, 0.1}, {0.5}, 1.0},
        ArmaSpec::arma11(0.95, -0.5),
    };
    const std::vector<double> omegas = {0.05, 0.8, 1.6, 2.4, 3.1};
    const double h = 1e-6;
    int pairs = 0;
    for (const auto& spec : specs) {
        for (double w : omegas) {
            ++pairs;
            const Eigen::VectorXd full = spec.full_params();
            const Eigen::VectorXd grad = log_spectral_gradient(spec, w, false);
            ASSERT_EQ(grad.size(), full.size());
            for (Eigen::Index i = 0; i < full.size(); ++i) {
                Eigen::VectorXd up = full;
                Eigen::VectorXd dn = full;
                up[i] += h;
                dn[i] -= h;
                const double fd = (std::log(spectral_density(ArmaSpec::from_full(spec.order(), up), w)) -
                                   std::log(spectral_density(ArmaSpec::from_full(spec.order(), dn), w))) /
                                  (2.0 * h);
                EXPECT_NEAR(grad[i], fd, 1e-5) << "param " << i << " omega " << w;
            }
            const Eigen::VectorXd prof = log_spectral_gradient(spec, w, true);
            ASSERT_EQ(prof.size(), full.size() - 1);
            EXPECT_TRUE(prof.isApprox(grad.head(prof.size()), 1e-12) || prof.norm() < 1e-12);
        }
    }
    EXPECT_EQ(pairs, 50);
}

TEST(LogGradient, Arma11AgainstFiniteDifference) {
    const ArmaSpec spec = ArmaSpec::arma11(0.7, 0.5);
    const double w = 1.0;
    const double h = 1e-6;
    const Eigen::VectorXd g = log_spectral_gradient(spec, w, true);
    const double d_phi = (std::log(spectral_density(ArmaSpec::arma11(0.7 + h, 0.5), w)) -
                          std::log(spectral_density(ArmaSpec::arma11(0.7 - h, 0.5), w))) / (2 * h);
    const double d_theta = (std::log(spectral_density(ArmaSpec::arma11(0.7, 0.5 + h), w)) -
                            std::log(spectral_density(ArmaSpec::arma11(0.7, 0.5 - h), w))) / (2 * h);
    EXPECT_NEAR(g[0], d_phi, 1e-6);
    EXPECT_NEAR(g[1], d_theta, 1e-6);
}

TEST(Validity, RootChecks) {
    EXPECT_TRUE(is_valid(ArmaSpec::arma11(0.9, -0.9)));
    EXPECT_FALSE(is_stationary(ArmaSpec::ar1(1.0)));
    EXPECT_FALSE(is_invertible(ArmaSpec::ma1(1.2)));
    // 1 - 0.5z - 0.5z^2 has a unit root at z = 1.
    EXPECT_FALSE(is_stationary({{0.5, 0.5}, {}, 1.0}));
    EXPECT_TRUE(is_stationary({{0.5, 0.3}, {}, 1.0}));
    EXPECT_NEAR(inverse_root_radius(std::vector<double>{0.6}), 0.6, 1e-15);
    EXPECT_EQ(inverse_root_radius(std::vector<double>{}), 0.0);
}

TEST(Validity, ErrorsAreDomainErrors) {
    EXPECT_THROW(validate(ArmaSpec::ar1(1.0)), DomainError);
    EXPECT_THROW(validate(ArmaSpec::ma1(-1.5)), DomainError);
    EXPECT_THROW(validate(ArmaSpec::white_noise(0.0)), DomainError);
    EXPECT_THROW(SpectralModel(ArmaSpec::ar1(2.0)), DomainError);
    EXPECT_THROW(simulate(ArmaSpec::ar1(1.0), 50, 1), DomainError);
    EXPECT_NO_THROW(validate(ArmaSpec::arma11(0.5, 0.5)));
}

TEST(Params, FullAndProfileRoundTrip) {
    const ArmaSpec spec{{0.5, -0.2}, {0.3}, 2.5};
    const ArmaSpec back = ArmaSpec::from_full(spec.order(), spec.full_params());
    EXPECT_EQ(back.ar, spec.ar);
    EXPECT_EQ(back.ma, spec.ma);
    EXPECT_EQ(back.sigma2, spec.sigma2);
    EXPECT_EQ(spec.profile_params().size(), 3);
    const ArmaSpec prof = ArmaSpec::from_profile(spec.order(), spec.profile_params(), 4.0);
    EXPECT_EQ(prof.ma, spec.ma);
    EXPECT_EQ(prof.sigma2, 4.0);
}

TEST(TimeSeriesType, RejectsShortSeries) {
    EXPECT_THROW(TimeSeries(std::vector<double>{1.0, 2.0, 3.0}), InputError);
    EXPECT_NO_THROW(TimeSeries(std::vector<double>{1.0, 2.0, 3.0, 4.0}));
    EXPECT_THROW(simulate(ArmaSpec::white_noise(), 3, 1), InputError);
}

TEST(Simulate, WhiteNoiseVariance) {
    const TimeSeries s = simulate(ArmaSpec::white_noise(), 100, 7);
    const double v = sample_variance(s.values());
    EXPECT_GE(v, 0.6);
    EXPECT_LE(v, 1.5);
}

TEST(Simulate, Ma1LagOneAutocorrelation) {
    const TimeSeries s = simulate(ArmaSpec::ma1(0.5), 100000, 11);
    const auto x = s.values();
    double c0 = 0.0;
    double c1 = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - s.mean();
        c0 += d * d;
        if (t > 0) c1 += d * (x[t - 1] - s.mean());
    }
    EXPECT_NEAR(c1 / c0, -0.4, 0.01);
}

TEST(Simulate, DeterministicGivenSeed) {
    const ArmaSpec spec = ArmaSpec::arma11(0.6, 0.3);
    const TimeSeries a = simulate(spec, 200, 42);
    const TimeSeries b = simulate(spec, 200, 42);
    const TimeSeries c = simulate(spec, 200, 43);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
}

TEST(Simulate, CenteredChiSquareIsRightSkewed) {
    const TimeSeries s = simulate(ArmaSpec::white_noise(), 100000, 5, {NoiseKind::CenteredChiSq5});
    const auto x = s.values();
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        const double d = v - s.mean();
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(x.size());
    m3 /= static_cast<double>(x.size());
    EXPECT_NEAR(s.mean(), 0.0, 0.05);
    EXPECT_NEAR(m2, noise_variance(NoiseKind::CenteredChiSq5), 0.3);
    // Skewness of chi-square(5) is sqrt(8/5) ~ 1.26.
    EXPECT_GT(m3 / std::pow(m2, 1.5), 1.0);
}

TEST(Simulate, SampleMeanCenteringRemovesInnovationMean) {
    const TimeSeries s =
        simulate(ArmaSpec::white_noise(), 50, 9, {NoiseKind::CenteredChiSq5, NoiseCentering::SampleMean});
    EXPECT_NEAR(s.mean(), 0.0, 1e-12);
}

TEST(Simulate, BurnInGrowsWithOrder) {
    EXPECT_EQ(burn_in_length({0, 0}), 500u);
    EXPECT_EQ(burn_in_length({1, 1}), 520u);
}
