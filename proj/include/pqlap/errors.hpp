#pragma once

#include <stdexcept>
#include <string>

namespace pqlap {

struct InvalidExponent : std::invalid_argument {
  explicit InvalidExponent(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidLength : std::invalid_argument {
  explicit InvalidLength(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroFunction : std::domain_error {
  explicit ZeroFunction(const std::string& what) : std::domain_error(what) {}
};

/// Thrown when the Nehari projection scalar has a nonpositive denominator,
/// i.e. the candidate violates the Rayleigh condition of the projection.
struct NotProjectable : std::domain_error {
  explicit NotProjectable(const std::string& what) : std::domain_error(what) {}
};

struct IntegrationFailure : std::runtime_error {
  explicit IntegrationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleNodalPattern : std::invalid_argument {
  explicit InfeasibleNodalPattern(const std::string& what) : std::invalid_argument(what) {}
};

struct PoorFit : std::runtime_error {
  explicit PoorFit(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveGap : std::runtime_error {
  explicit NonPositiveGap(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pqlap
