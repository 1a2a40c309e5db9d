#pragma once

#include <Eigen/Dense>

namespace aelts {

// Estimating-function evaluations, one row per periodogram ordinate. After
// adjustment the last row is the pseudo-observation -a_n * mean(rows 1..n).
struct PsiMatrix {
    Eigen::MatrixXd rows;
    bool adjusted = false;
    double a_n = 0.0;

    [[nodiscard]] Eigen::Index size() const noexcept { return rows.rows(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return rows.cols(); }
    [[nodiscard]] Eigen::Index data_rows() const noexcept {
        return adjusted ? rows.rows() - 1 : rows.rows();
    }
    [[nodiscard]] Eigen::VectorXd column_sums() const { return rows.colwise().sum().transpose(); }
};

}  // namespace aelts
