#pragma once

#include <stdexcept>
#include <string>

namespace ite {

/// Special-function evaluation left the representable range (overflow, pole).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation at a singular point, e.g. h_p(0).
class PoleError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

/// Iterative refinement failed to converge; carries the offending bracket.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}
    double bracket_lo() const noexcept { return lo_; }
    double bracket_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// Continuation of an eigenvalue curve lost its root or hit an ambiguous match.
class TrackingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nonlinear eigensolver failure (probe too small, contour through an eigenvalue).
class NepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration; maps to exit code 2 in the CLI.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ite
