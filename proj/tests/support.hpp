#pragma once

#include "aelts/arma_model.hpp"
#include "aelts/periodogram.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>

namespace aelts::testing {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

inline Periodogram simulated_periodogram(const ArmaSpec& spec, std::size_t length, std::uint64_t seed,
                                         FrequencyRange range = FrequencyRange::Full) {
    return compute_periodogram(simulate(spec, length, seed), range);
}

}  // namespace aelts::testing
