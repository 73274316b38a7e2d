#pragma once

#include <stdexcept>
#include <string>

namespace spampipe {

// Bad corpus paths, unreadable indices, malformed data files.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration values or violated parameter invariants.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spampipe
