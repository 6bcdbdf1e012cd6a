#pragma once

#include <stdexcept>
#include <string>

namespace thermoqfi {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input: bad configuration values, mismatched dimensions, violated
// preconditions. Maps to process exit code 2 in the CLI.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class DimensionError : public ConfigError {
public:
    explicit DimensionError(const std::string& msg) : ConfigError(msg) {}
};

// A computation produced a non-finite or otherwise untrustworthy result.
// Maps to process exit code 3 in the CLI. Never silently ignored.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

} // namespace thermoqfi
