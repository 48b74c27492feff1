#pragma once

#include <stdexcept>
#include <string>

namespace dcesim {

/// Rejected configuration (out-of-range parameter, inconsistent flags).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The adaptive integrator could not advance a column.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, int column, double time);

    int column() const noexcept { return column_; }
    double time() const noexcept { return time_; }

private:
    int column_;
    double time_;
};

/// Evolution states handed to a snapshot routine disagree on K or t1.
class ShapeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No mass realises the requested exact mode coupling.
class NoSolution : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace dcesim
