#pragma once

#include <stdexcept>
#include <string>

namespace macrobell {

// Invalid parameters or unsupported configurations; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A runtime numerical guard tripped (mass deficit, lost monotonicity,
// degenerate denominator); maps to CLI exit code 3.
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

}
