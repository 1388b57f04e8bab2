#pragma once

#include <stdexcept>

namespace rt {

// Boundary data fails the range condition beyond the tolerated threshold.
class DataConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A declared precondition (subcriticality, boundary vanishing, ...) is violated.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The h-function machinery is under-resolved (negative-mode mass too large).
class HAccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rt
