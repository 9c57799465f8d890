#pragma once

#include <stdexcept>
#include <string>

namespace myogan {

// Bad caller input: shape mismatches, out-of-range values, malformed files.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Forward simulation left the sane region (|theta| > 10*pi).
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Training produced non-finite losses/gradients; last checkpoint stays intact.
class TrainingAbort : public std::runtime_error {
 public:
  explicit TrainingAbort(const std::string& what) : std::runtime_error(what) {}
};

// Covariance (or similar) too degenerate to evaluate a metric.
class ConditioningError : public std::runtime_error {
 public:
  explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace myogan
