#include "aelts/el_core.hpp"
#include "aelts/error.hpp"
#include "aelts/whittle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace aelts;
using aelts::testing::simulated_periodogram;
using aelts::testing::vec;

namespace {

PsiMatrix column(std::initializer_list<double> values) {
    PsiMatrix p;
    p.rows = vec(values);
    return p;
}

PsiMatrix random_psi(Eigen::Index m, Eigen::Index k, std::uint64_t seed, double shift = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    PsiMatrix p;
    p.rows.resize(m, k);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) p.rows(i, j) = normal(rng) + shift;
    }
    return p;
}

}  // namespace

TEST(Adjustment, PolicyValues) {
    EXPECT_NEAR(AdjustmentPolicy::max_one_half_log().value(20), 1.4979, 1e-4);
    EXPECT_EQ(AdjustmentPolicy::max_one_half_log().value(7), 1.0);
    EXPECT_NEAR(AdjustmentPolicy::half_log().value(7), 0.9730, 1e-4);
    EXPECT_EQ(AdjustmentPolicy::none().value(50), 0.0);
    EXPECT_EQ(AdjustmentPolicy::fixed(2.5).value(50), 2.5);
    // Every rule is capped at n/2.
    EXPECT_EQ(AdjustmentPolicy::fixed(5.0).value(2), 1.0);
    EXPECT_EQ(AdjustmentPolicy::max_one_half_log().value(1), 0.5);
    EXPECT_THROW(static_cast<void>(AdjustmentPolicy::fixed(-1.0).value(10)), ConfigError);
}

TEST(Adjustment, AppendsScaledNegativeMean) {
    const PsiMatrix psi = random_psi(25, 2, 3, 0.4);
    const PsiMatrix adj = adjust(psi, AdjustmentPolicy::max_one_half_log());
    ASSERT_EQ(adj.size(), 26);
    EXPECT_TRUE(adj.adjusted);
    EXPECT_NEAR(adj.a_n, std::log(25.0) / 2.0, 1e-15);
    const Eigen::RowVectorXd expected = -(adj.a_n / 25.0) * psi.rows.colwise().sum();
    EXPECT_LT((adj.rows.row(25) - expected).norm(), 1e-14);
    EXPECT_EQ(adj.data_rows(), 25);
}

TEST(Adjustment, ZeroMeanGivesZeroRow) {
    const PsiMatrix adj = adjust(column({-1.0, 2.0, -1.0}), AdjustmentPolicy::half_log());
    EXPECT_EQ(adj.rows(3, 0), 0.0);
}

TEST(Adjustment, RejectsDoubleAdjustmentAndPassesNone) {
    const PsiMatrix psi = random_psi(10, 1, 1);
    const PsiMatrix once = adjust(psi, AdjustmentPolicy::half_log());
    EXPECT_THROW(adjust(once, AdjustmentPolicy::half_log()), UsageError);
    const PsiMatrix same = adjust(psi, AdjustmentPolicy::none());
    EXPECT_FALSE(same.adjusted);
    EXPECT_EQ(same.rows, psi.rows);
}

TEST(Adjustment, TrimmedMeanWinsorizesOutliers) {
    PsiMatrix psi = random_psi(200, 1, 2);
    psi.rows(0, 0) = 1e6;
    AdjustmentPolicy trimmed = AdjustmentPolicy::half_log();
    trimmed.trim = true;
    const PsiMatrix plain = adjust(psi, AdjustmentPolicy::half_log());
    const PsiMatrix robust = adjust(psi, trimmed);
    EXPECT_GT(std::abs(plain.rows(200, 0)), 1e3);
    EXPECT_LT(std::abs(robust.rows(200, 0)), 1.0);
    EXPECT_EQ(trimmed.describe(), "log(n)/2+trim");
}

TEST(SolveDual, ZeroRows) {
    PsiMatrix p;
    p.rows = Eigen::MatrixXd::Zero(5, 2);
    const ElSolution s = solve_dual(p);
    EXPECT_TRUE(s.converged);
    EXPECT_EQ(s.stat, 0.0);
    EXPECT_TRUE(s.xi.isZero(0.0));
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(s.weights[i], 0.2, 1e-15);
}

TEST(SolveDual, ClosedFormScalarExample) {
    const ElSolution s = solve_dual(column({-1.0, 2.0}));
    EXPECT_NEAR(s.xi[0], 0.25, 1e-9);
    EXPECT_NEAR(s.stat, 2.0 * std::log(9.0 / 8.0), 1e-9);
    EXPECT_NEAR(s.stat, 0.23556, 1e-5);
}

TEST(SolveDual, AgreesWithGridBruteForce) {
    // The dual -sum log(1 + xi psi) is minimized at the true multiplier.
    double best_xi = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (double xi = -0.5 + 1e-6; xi < 1.0; xi += 1e-6) {
        const double v = -std::log(1.0 - xi) - std::log(1.0 + 2.0 * xi);
        if (v < best) {
            best = v;
            best_xi = xi;
        }
    }
    const ElSolution s = solve_dual(column({-1.0, 2.0}));
    EXPECT_NEAR(s.xi[0], best_xi, 2e-6);
    EXPECT_NEAR(s.stat, -2.0 * best, 1e-10);
}

TEST(SolveDual, SameSignRowsHaveNoSolution) {
    EXPECT_THROW(solve_dual(column({0.5, 1.0, 2.0, 0.1})), NoSolutionError);
    EXPECT_THROW(solve_dual(column({-0.5, -1.0, -3.0})), NoSolutionError);
    // Zero on the hull boundary is not interior either.
    EXPECT_THROW(solve_dual(column({0.0, 1.0, 2.0})), NoSolutionError);
}

TEST(SolveDual, AdjustmentRestoresSolvability) {
    const PsiMatrix psi = column({0.5, 1.0, 2.0, 0.1});
    const ElSolution s = solve_dual(adjust(psi, AdjustmentPolicy::max_one_half_log()));
    EXPECT_TRUE(s.converged);
    EXPECT_GT(s.stat, 0.0);
}

TEST(SolveDual, NoSolutionInTwoDimensions) {
    PsiMatrix p = random_psi(30, 2, 9);
    // Push every row into the half-plane x + y > 0.
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double s = p.rows(i, 0) + p.rows(i, 1);
        if (s <= 0.0) p.rows.row(i) -= Eigen::RowVector2d(s - 0.01, 0.0);
    }
    EXPECT_THROW(solve_dual(p), NoSolutionError);
    EXPECT_NO_THROW(solve_dual(adjust(p, AdjustmentPolicy::half_log())));
}

TEST(SolveDual, WeightsSatisfyConstraints) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const PsiMatrix psi = adjust(random_psi(40, 3, seed, 0.2), AdjustmentPolicy::max_one_half_log());
        const ElSolution s = solve_dual(psi);
        ASSERT_TRUE(s.converged);
        EXPECT_NEAR(s.weights.sum(), 1.0, 1e-12);
        EXPECT_GT(s.weights.minCoeff(), 0.0);
        EXPECT_LT((psi.rows.transpose() * s.weights).norm(), 1e-8);
        const Eigen::VectorXd d = Eigen::VectorXd::Ones(psi.size()) + psi.rows * s.xi;
        for (Eigen::Index j = 0; j < psi.size(); ++j) {
            EXPECT_NEAR(s.weights[j], 1.0 / (static_cast<double>(psi.size()) * d[j]), 1e-14);
        }
        EXPECT_GE(s.stat, 0.0);
    }
}

TEST(SolveDual, InvariantUnderRowPermutation) {
    const PsiMatrix psi = random_psi(35, 2, 4, 0.1);
    PsiMatrix perm = psi;
    std::vector<Eigen::Index> idx(35);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), std::mt19937_64(8));
    for (Eigen::Index i = 0; i < 35; ++i) perm.rows.row(i) = psi.rows.row(idx[static_cast<std::size_t>(i)]);
    EXPECT_NEAR(solve_dual(psi).stat, solve_dual(perm).stat, 1e-10);
}

TEST(SolveDual, InvariantUnderLinearMap) {
    const PsiMatrix psi = random_psi(50, 2, 6, 0.15);
    Eigen::Matrix2d map;
    map << 2.0, -0.7, 0.3, 0.5;
    PsiMatrix mapped = psi;
    mapped.rows = psi.rows * map;
    EXPECT_NEAR(solve_dual(psi).stat, solve_dual(mapped).stat, 1e-9);
}

TEST(SolveDual, HandlesCollinearRows) {
    // Rank-one rows in two dimensions: the multiplier is only determined along the span.
    PsiMatrix p;
    p.rows.resize(6, 2);
    const Eigen::VectorXd s = vec({-1.0, 2.0, 0.5, -0.3, 1.2, -2.0});
    p.rows.col(0) = s;
    p.rows.col(1) = -s;
    PsiMatrix one;
    one.rows = s;
    EXPECT_NEAR(solve_dual(p).stat, solve_dual(one).stat, 1e-9);
}

TEST(SolveDual, RejectsNonFiniteInput) {
    PsiMatrix p = column({1.0, -1.0});
    p.rows(0, 0) = std::nan("");
    EXPECT_THROW(solve_dual(p), InputError);
}

TEST(ElStat, ZeroAtWhittleEstimate) {
    const Periodogram pg = simulated_periodogram(ArmaSpec::arma11(0.5, 0.2), 80, 5);
    const WhittleFit fit = whittle_fit(pg, {1, 1});
    StatOptions adjusted;
    StatOptions plain;
    plain.adjusted = false;
    EXPECT_LT(el_stat(pg, {1, 1}, fit.estimate, adjusted).stat, 1e-12);
    EXPECT_LT(el_stat(pg, {1, 1}, fit.estimate, plain).stat, 1e-12);
}

TEST(ElStat, AdjustedNeverExceedsUnadjustedOnGrid) {
    const Periodogram pg = simulated_periodogram(ArmaSpec::arma11(0.6, 0.3), 40, 77);
    StatOptions adjusted;
    StatOptions plain;
    plain.adjusted = false;
    int compared = 0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const Eigen::VectorXd beta = vec({(i + 0.5) / 20.0, (j + 0.5) / 20.0});
            const double w_star = el_stat(pg, {1, 1}, beta, adjusted).stat;
            try {
                const double w = el_stat(pg, {1, 1}, beta, plain).stat;
                EXPECT_LE(w_star, w + 1e-8);
                ++compared;
            } catch (const NoSolutionError&) {
            }
        }
    }
    EXPECT_GT(compared, 0);
}

TEST(ElStat, FullParameterisationIncludesSigma2) {
    const Periodogram pg = simulated_periodogram(ArmaSpec::ma1(0.4), 60, 2);
    StatOptions opts;
    opts.profile = false;
    const ElSolution s = el_stat(pg, {0, 1}, vec({0.4, 1.0}), opts);
    EXPECT_EQ(s.xi.size(), 2);
    EXPECT_TRUE(s.converged);
}

TEST(ElStat, MeanOfAdjustedStatisticNearOneAtModerateLength) {
    // A quick version of the chi-square(1) calibration check.
    double sum = 0.0;
    const int reps = 300;
    for (int r = 0; r < reps; ++r) {
        const Periodogram pg = simulated_periodogram(ArmaSpec::ma1(0.5), 256, 1000 + r);
        sum += el_stat(pg, {0, 1}, vec({0.5}), {}).stat;
    }
    EXPECT_NEAR(sum / reps, 1.0, 0.2);
}
