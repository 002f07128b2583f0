#pragma once

#include <stdexcept>
#include <string>

namespace riskbound {

// Input outside the mathematical domain (bad parameter, g(0) != 0, sigma < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke a documented precondition (wrong g(1) for an entropy engine, etc).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature / root / sup failure. Carries the best estimate so callers can report it.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    explicit NumericError(const std::string& what)
        : NumericError(what, 0.0, 0.0) {}

    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

}  // namespace riskbound
