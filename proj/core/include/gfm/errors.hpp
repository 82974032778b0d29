#pragma once

#include <stdexcept>

namespace gfm {

/// Invalid or inconsistent user-supplied configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The search exhausted its open set without reaching the goal.
struct NoPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The search hit its node-expansion budget.
struct IterationLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gfm
