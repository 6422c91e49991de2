#pragma once

#include <stdexcept>
#include <string>

namespace renewal {

// Bad user input: malformed config, invalid distribution parameters.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric result could not be certified to the requested tolerance
// (truncation bounds too large, step budget exhausted).
struct CertificationError : std::runtime_error {
  explicit CertificationError(const std::string& what)
      : std::runtime_error(what) {}
};

// An asymptotic predictor was invoked outside its regime
// (wrong rho / span / finiteness flags).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace renewal
