#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drm {

// Inputs outside the mathematical domain of a routine (sigma < 0, xi below the
// curvature floor, mismatched sample sizes, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed requests: conflicting options, kind mismatches, missing arguments.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The moment/transport constraints admit no distribution (dual unbounded below).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative method exhausted its budget or lost numerical control.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double lambda1, double lambda2, double value)
        : std::runtime_error(what), best_lambda1(lambda1), best_lambda2(lambda2), best_value(value) {}
    explicit SolverFailure(const std::string& what) : SolverFailure(what, 0.0, 0.0, 0.0) {}

    double best_lambda1;
    double best_lambda2;
    double best_value;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row) : std::runtime_error(what), row(row) {}
    std::size_t row;  // 1-based line number in the source file, 0 when not tied to a line
};

}  // namespace drm
