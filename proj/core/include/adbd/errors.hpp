#pragma once

#include <stdexcept>
#include <string>

namespace adbd {

// Invalid arguments, shapes or configuration values. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values, divergence, degenerate denominators. Maps to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed files (PGM, checkpoints, configs on disk).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace adbd
