#pragma once
#include <stdexcept>
#include <string>

namespace secrecy {

// argument outside the mathematical domain of an evaluator
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// container/range argument that must be non-empty was empty
struct EmptyInput : std::invalid_argument {
    explicit EmptyInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// adaptive quadrature hit its subdivision budget; carries the best estimate
struct NoConvergence : std::runtime_error {
    double best_estimate;
    double error_bound;
    NoConvergence(const std::string& msg, double best, double err)
        : std::runtime_error(msg), best_estimate(best), error_bound(err) {}
};

// search bracket did not contain a statistically significant sign change
struct NoSignChange : std::runtime_error {
    explicit NoSignChange(const std::string& msg) : std::runtime_error(msg) {}
};

// trend verification needs at least three points per series
struct InsufficientPoints : std::runtime_error {
    explicit InsufficientPoints(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace secrecy
