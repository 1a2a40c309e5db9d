#include "aelts/whittle.hpp"

#include "aelts/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

namespace aelts {

namespace {

void require_nonempty(const Periodogram& pg) {
    if (pg.size() == 0) throw InputError("periodogram has no ordinates");
}

ArmaSpec spec_from(ArmaOrder order, const Eigen::VectorXd& params, bool profile) {
    return profile ? ArmaSpec::from_profile(order, params) : ArmaSpec::from_full(order, params);
}

double objective_value(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                       bool profile) {
    if (profile) return profile_loglik(pg, order, params).value;
    return whittle_loglik(pg, ArmaSpec::from_full(order, params));
}

}  // namespace

double whittle_loglik(const Periodogram& pg, const ArmaSpec& spec) {
    require_nonempty(pg);
    const SpectralModel model(spec);
    double value = 0.0;
    for (std::size_t j = 0; j < pg.size(); ++j) {
        const double g = model.density(pg.freqs[j]);
        value -= std::log(g) + pg.ords[j] / g;
    }
    return value;
}

ProfileLikelihood profile_loglik(const Periodogram& pg, ArmaOrder order,
                                 const Eigen::VectorXd& beta1) {
    require_nonempty(pg);
    const SpectralModel model(ArmaSpec::from_profile(order, beta1));
    const double n = static_cast<double>(pg.size());
    double ratio_sum = 0.0;
    double log_sum = 0.0;
    for (std::size_t j = 0; j < pg.size(); ++j) {
        const double g1 = model.unit_density(pg.freqs[j]);
        ratio_sum += pg.ords[j] / g1;
        log_sum += std::log(g1);
    }
    ProfileLikelihood out;
    out.sigma2 = ratio_sum / n;
    out.value = -n * std::log(out.sigma2) - log_sum - n;
    return out;
}

PsiMatrix psi_full(const Periodogram& pg, const ArmaSpec& spec) {
    require_nonempty(pg);
    const SpectralModel model(spec);
    const auto k = static_cast<Eigen::Index>(spec.order().full_dim());
    PsiMatrix psi;
    psi.rows.resize(static_cast<Eigen::Index>(pg.size()), k);
    for (std::size_t j = 0; j < pg.size(); ++j) {
        const double g = model.density(pg.freqs[j]);
        psi.rows.row(static_cast<Eigen::Index>(j)) =
            (pg.ords[j] / g - 1.0) * model.log_gradient(pg.freqs[j], false).transpose();
    }
    return psi;
}

PsiMatrix psi_profile(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& beta1) {
    require_nonempty(pg);
    const SpectralModel model(ArmaSpec::from_profile(order, beta1));
    const auto n = static_cast<Eigen::Index>(pg.size());
    Eigen::MatrixXd grads(n, order.profile_dim());
    Eigen::VectorXd ratio(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        grads.row(j) = model.log_gradient(pg.freqs[js], true).transpose();
        ratio[j] = pg.ords[js] / model.unit_density(pg.freqs[js]);
    }
    const Eigen::RowVectorXd centre = grads.colwise().mean();
    PsiMatrix psi;
    psi.rows = (grads.rowwise() - centre).array().colwise() * ratio.array();
    return psi;
}

double region_violation(ArmaOrder order, const Eigen::VectorXd& params, bool profile) {
    const Eigen::Index expected = profile ? order.profile_dim() : order.full_dim();
    if (params.size() != expected) throw InputError("parameter vector has wrong length");
    if (!params.allFinite()) return std::numeric_limits<double>::infinity();
    const double limit = 1.0 - kRootMargin;
    const ArmaSpec spec = spec_from(order, params, profile);
    double v = std::max(0.0, inverse_root_radius(spec.ar) - limit) +
               std::max(0.0, inverse_root_radius(spec.ma) - limit);
    if (!profile && !(spec.sigma2 > 0.0)) v += 1.0 - spec.sigma2;
    return v;
}

WhittleFit whittle_fit(const Periodogram& pg, ArmaOrder order, const FitOptions& options) {
    require_nonempty(pg);
    const bool profile = options.profile;
    const int coeffs = order.profile_dim();
    const Eigen::Index dim = profile ? coeffs : coeffs + 1;

    std::vector<Eigen::VectorXd> starts;
    if (options.init) {
        if (options.init->size() != dim) throw InputError("initial vector has wrong length");
        starts.push_back(*options.init);
    } else {
        Eigen::VectorXd centre = Eigen::VectorXd::Zero(coeffs);
        starts.push_back(centre);
        if (coeffs >= 2) {
            std::mt19937_64 rng(options.start_seed);
            std::uniform_real_distribution<double> jitter(-0.5, 0.5);
            while (starts.size() < 5) {
                Eigen::VectorXd s(coeffs);
                for (auto& v : s) v = jitter(rng);
                if (region_violation(order, s, true) == 0.0) starts.push_back(s);
            }
        }
        if (!profile) {
            for (auto& s : starts) {
                const double s2 = profile_loglik(pg, order, s).sigma2;
                Eigen::VectorXd full(dim);
                full << s, (s2 > 0.0 ? s2 : 1.0);
                s = full;
            }
        }
    }
    for (const auto& s : starts) {
        if (region_violation(order, s, profile) > 0.0) {
            throw DomainError("initial parameter vector lies outside the valid region");
        }
    }

    const double reference = std::abs(objective_value(pg, order, starts.front(), profile));
    const double penalty_base = 1e6 + 10.0 * reference;
    auto negloglik = [&](const Eigen::VectorXd& x) {
        const double viol = region_violation(order, x, profile);
        if (viol > 0.0) return penalty_base * (1.0 + viol);
        const double v = objective_value(pg, order, x, profile);
        return std::isfinite(v) ? -v : penalty_base;
    };

    WhittleFit best;
    best.loglik = -std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        Eigen::VectorXd steps = Eigen::VectorXd::Constant(dim, options.simplex.initial_step);
        if (!profile) steps[dim - 1] = 0.2 * start[dim - 1];
        const NelderMeadResult nm = nelder_mead(negloglik, start, steps, options.simplex);
        const double ll = -nm.value;
        if (ll > best.loglik) {
            best.estimate = nm.argmin;
            best.loglik = ll;
            best.converged = nm.converged;
            best.iterations = nm.iterations;
        }
    }
    best.starts = static_cast<int>(starts.size());

    // Newton on the score sum_j psi_j(params) = 0, the first-order condition.
    // Steps are kept only when they stay in the region and do not lower the
    // likelihood beyond rounding.
    if (dim > 0 && best.converged) {
        const auto none = AdjustmentPolicy::none();
        for (int it = 0; it < options.newton_polish_steps; ++it) {
            const Eigen::VectorXd score = psi_at(pg, order, best.estimate, profile, none).column_sums();
            if (score.norm() < 1e-12 * static_cast<double>(pg.size())) break;
            Eigen::MatrixXd jac(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                const double h = 1e-6 * std::max(1.0, std::abs(best.estimate[i]));
                Eigen::VectorXd up = best.estimate;
                Eigen::VectorXd down = best.estimate;
                up[i] += h;
                down[i] -= h;
                if (region_violation(order, up, profile) > 0.0 ||
                    region_violation(order, down, profile) > 0.0) {
                    jac.setZero();
                    break;
                }
                jac.col(i) = (psi_at(pg, order, up, profile, none).column_sums() -
                              psi_at(pg, order, down, profile, none).column_sums()) /
                             (2.0 * h);
            }
            if (jac.isZero(0.0)) break;
            const Eigen::VectorXd candidate = best.estimate - jac.fullPivLu().solve(score);
            if (!candidate.allFinite() || region_violation(order, candidate, profile) > 0.0) break;
            if ((candidate - best.estimate).norm() > 1e-3) break;
            const double ll = objective_value(pg, order, candidate, profile);
            if (!(ll >= best.loglik - 1e-9 * std::max(1.0, std::abs(best.loglik)))) break;
            const Eigen::VectorXd next_score =
                psi_at(pg, order, candidate, profile, none).column_sums();
            if (next_score.norm() >= score.norm()) break;
            best.estimate = candidate;
            best.loglik = std::max(best.loglik, ll);
        }
        best.loglik = objective_value(pg, order, best.estimate, profile);
    }

    best.sigma2 = profile ? profile_loglik(pg, order, best.estimate).sigma2
                          : best.estimate[dim - 1];
    return best;
}

PsiMatrix psi_at(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                 bool profile, const AdjustmentPolicy& policy) {
    PsiMatrix psi = profile ? psi_profile(pg, order, params)
                            : psi_full(pg, ArmaSpec::from_full(order, params));
    return adjust(psi, policy);
}

SandwichDiag sandwich(const Periodogram& pg, ArmaOrder order, const Eigen::VectorXd& params,
                      bool profile, const AdjustmentPolicy& policy) {
    const PsiMatrix centre = psi_at(pg, order, params, profile, policy);
    const Eigen::Index k = centre.dim();
    const double m = static_cast<double>(centre.size());

    SandwichDiag diag;
    diag.Sigma_hat = centre.rows.transpose() * centre.rows / m;
    diag.A_hat.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(params[i]));
        // Central where both steps stay in the model region, one-sided at its edge.
        auto sums_at = [&](double shift) -> std::optional<Eigen::VectorXd> {
            Eigen::VectorXd at = params;
            at[i] += shift;
            try {
                return psi_at(pg, order, at, profile, policy).column_sums();
            } catch (const DomainError&) {
                return std::nullopt;
            }
        };
        const auto up = sums_at(h);
        const auto down = sums_at(-h);
        if (up && down) {
            diag.A_hat.col(i) = (*up - *down) / (2.0 * h * m);
        } else if (up || down) {
            const Eigen::VectorXd c = centre.column_sums();
            diag.A_hat.col(i) = up ? Eigen::VectorXd((*up - c) / (h * m)) : Eigen::VectorXd((c - *down) / (h * m));
        } else {
            throw DomainError("sandwich: no valid difference step around the parameter");
        }
    }

    if (k == 0) {
        diag.V_hat.resize(0, 0);
        return diag;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(diag.A_hat);
    const auto& sv = svd.singularValues();
    diag.a_condition = sv[0] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
    if (!std::isfinite(diag.a_condition) || diag.a_condition > 1e12) {
        std::ostringstream msg;
        msg << "A_hat is singular (condition number " << diag.a_condition << ")";
        throw SingularMatrixError(msg.str(), diag.a_condition);
    }
    const Eigen::MatrixXd a_inv = diag.A_hat.inverse();
    diag.V_hat = a_inv * diag.Sigma_hat * a_inv.transpose();
    return diag;
}

}  // namespace aelts
