#pragma once

#include <stdexcept>
#include <string>

namespace uagraph {

/// Rejected input: bad parameters, malformed files, unknown vertices.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The attachment process cannot continue (fewer than m open vertices).
class ModelViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant or asserted property failed at runtime.
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration or search would exceed its configured size guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PropertyViolation(message);
}

}  // namespace uagraph
