#pragma once

#include <stdexcept>
#include <string>

namespace sticky {

/// Precondition violated by a caller-supplied value.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A required assumption flag was not set for a bound that consumes it.
class AssumptionError : public DomainError {
public:
    explicit AssumptionError(const std::string& what) : DomainError(what) {}
};

/// Eigen-solver, factorization or optimizer did not reach its tolerance.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-range configuration, carrying the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw DomainError(message);
}

}  // namespace sticky
