#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Base class for all horolab failures. Subclasses map to CLI exit codes
// (config -> 2, numeric -> 3, cache -> 4).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside an operation's stated domain.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Invalid construction request (support margin violated, overlapping
// supports, degenerate normalizer, ...).
struct ConstructionError : Error {
    explicit ConstructionError(const std::string& msg) : Error(msg) {}
};

// Non-finite intermediate, overflow, reduction divergence, failed
// root finding: anything that signals numeric corruption.
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureError : NumericError {
    explicit QuadratureError(const std::string& msg) : NumericError(msg) {}
};

// Malformed or invalid experiment configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Orbit cache file corruption or version mismatch.
struct CacheError : Error {
    explicit CacheError(const std::string& msg) : Error(msg) {}
};

} // namespace horolab
