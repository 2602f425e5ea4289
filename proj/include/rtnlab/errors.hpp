#pragma once

#include <stdexcept>
#include <string>

namespace rtnlab {

/// Configuration problems; the CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration or memory budget exceeded; the CLI maps these to exit code 3.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rtnlab
