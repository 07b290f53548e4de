#pragma once

#include <stdexcept>
#include <string>

namespace dualmon {

/// Raised for malformed configuration files or invalid run settings.
/// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical procedure fails to converge or a solver
/// cannot certify its result. The CLI maps this to exit code 3.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dualmon
