#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Raised for malformed or invalid configuration input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when a numerical procedure cannot produce a result (root not
/// bracketed, solver divergence). Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace optomech
