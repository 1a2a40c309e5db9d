#include "aelts/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace aelts {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& options) {
    const Eigen::Index dim = start.size();
    NelderMeadResult result;
    if (dim == 0) {
        result.argmin = start;
        result.value = objective(start);
        result.converged = true;
        return result;
    }

    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(dim + 1), start);
    for (Eigen::Index i = 0; i < dim; ++i) simplex[static_cast<std::size_t>(i + 1)][i] += steps[i];
    std::vector<double> values(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = objective(simplex[i]);

    std::vector<std::size_t> idx(simplex.size());
    auto diameter = [&](std::size_t best) {
        double d = 0.0;
        for (const auto& v : simplex) d = std::max(d, (v - simplex[best]).cwiseAbs().maxCoeff());
        return d;
    };

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        const std::size_t best = idx.front();
        const std::size_t worst = idx.back();
        const std::size_t second = idx[idx.size() - 2];
        if (diameter(best) < options.diameter_tolerance) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != worst) centroid += simplex[i];
        }
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
        const double f_reflected = objective(reflected);
        if (f_reflected < values[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < values[worst];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
        const double f_contracted = objective(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            values[i] = objective(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.argmin = simplex[best];
    result.value = values[best];
    result.iterations = iter;
    return result;
}

}  // namespace aelts
