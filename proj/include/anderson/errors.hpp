#pragma once

#include <stdexcept>
#include <string>

namespace anderson {

/// Input outside an operation's domain. Maps to CLI exit code 2.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at a point where a density is singular.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative solver stopped before reaching its tolerance. Maps to exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Root finder given a bracket with no sign change.
class BracketingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace anderson
