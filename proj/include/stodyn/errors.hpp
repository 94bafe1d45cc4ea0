#pragma once

#include <stdexcept>
#include <string>

namespace stodyn {

// Argument outside the mathematical domain of an operation (e.g. a
// probability outside (0,1), a nonpositive Poisson mean).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A conditioning region with no probability mass.
class DegenerateRegionError : public DomainError {
public:
    explicit DegenerateRegionError(const std::string& what) : DomainError(what) {}
};

// Malformed instance/config input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A solver returned an assignment that contradicts the model structure
// (typically a tolerance problem in the binary variables).
class ModelIntegrityError : public std::runtime_error {
public:
    explicit ModelIntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// A required external facility (solver adapter) is missing.
class EnvironmentError : public std::runtime_error {
public:
    explicit EnvironmentError(const std::string& what) : std::runtime_error(what) {}
};

// Two quantities that must be ordered (e.g. lower/upper bounds) are not.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stodyn
