#pragma once

#include <stdexcept>
#include <string>

namespace hspec {

/// Invalid input or configuration (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A computation could not be completed (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operator data violates a hypothesis the bounds rely on, e.g. a branch
/// whose image leaves the contracted ball.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hspec
