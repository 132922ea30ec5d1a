#ifndef SEQIHR_ERRORS_HPP
#define SEQIHR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seqihr {

// Error classes map 1:1 onto the CLI exit codes (1..4).

/// Bad configuration or parameter values.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable or malformed input data.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at run time (degenerate state, blow-up, step size).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solve that did not reach its stopping criterion.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace seqihr

#endif
