#pragma once

#include <stdexcept>

namespace recog {

// Invalid or inconsistent user configuration. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A valid configuration whose predicted cost or size exceeds the budget.
// CLI maps this to exit code 3.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace recog
