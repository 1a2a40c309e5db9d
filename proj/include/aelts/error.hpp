#pragma once

#include <stdexcept>
#include <string>

namespace aelts {

// Parameter outside the stationarity/invertibility region, or a
// non-positive variance.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed user input: short series, unparseable file, bad order string.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Invalid experiment plan or option combination.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// API misuse such as adjusting an already adjusted PsiMatrix.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// The empirical likelihood inner problem has no solution: zero is not an
// interior point of the convex hull of the estimating-function rows.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver stopped before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

// Matrix that must be inverted is singular or numerically close to it.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}

    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace aelts
