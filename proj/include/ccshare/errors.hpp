#pragma once

#include <stdexcept>
#include <string>

namespace ccshare {

// Invalid argument to a library call (bad index, wrong dimensions, out-of-range angle).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical result violates a validity bound (e.g. a strongly negative eigenvalue).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Optimizer objective produced a non-finite value.
class OptimizationError : public std::runtime_error {
public:
    OptimizationError(const std::string &what, double theta, double phi)
        : std::runtime_error(what), theta_(theta), phi_(phi) {}
    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

private:
    double theta_;
    double phi_;
};

// Bad data fed into a statistics accumulator.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad command line or config file; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ccshare
