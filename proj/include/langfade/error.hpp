#pragma once

#include <stdexcept>
#include <string>

namespace langfade {

/// Bad input data: unreadable files, malformed rows, degenerate statistics inputs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optimizer or estimator failure.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid command-line or configuration usage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace langfade
