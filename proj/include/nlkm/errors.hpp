// Error types shared across the library and the CLI exit-code mapping.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nlkm {

/// Malformed or inconsistent run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A runtime numerical invariant was violated during integration (CLI exit code 3).
struct NumericalError : std::runtime_error {
    NumericalError(const std::string& msg, std::int64_t step)
        : std::runtime_error(msg + " (at step " + std::to_string(step) + ")"), step_index(step) {}
    std::int64_t step_index;
};

/// Filesystem / serialization failure, always carries the path (CLI exit code 4).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nlkm
