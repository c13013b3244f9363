#pragma once

#include <stdexcept>
#include <string>

namespace statrec {

// Error taxonomy mirrors the CLI exit codes: config/usage 2, input format 3,
// parameter regime 4.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an exhaustive routine is asked for an instance above its size
// guard; callers either shrink the instance or fall back to a heuristic.
class GuardError : public ConfigError {
public:
    explicit GuardError(const std::string& msg) : ConfigError(msg) {}
};

}  // namespace statrec
