#pragma once

#include <stdexcept>
#include <string>

namespace reluinv {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed models, instances, configs, or arguments violating a precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An iterative numerical routine failed to reach its tolerance (simplex
// iteration limit, projection round cap, ...).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Boundary set too large to enumerate neighbor activation patterns.
class PatternCapExceeded : public Error {
 public:
  PatternCapExceeded(std::size_t boundary_size, std::size_t cap)
      : Error("boundary set has " + std::to_string(boundary_size) +
              " neurons, enumeration cap is " + std::to_string(cap)),
        boundary_size_(boundary_size) {}

  std::size_t boundary_size() const noexcept { return boundary_size_; }

 private:
  std::size_t boundary_size_;
};

// Two activation patterns were expected to differ but do not.
class NoDiscrepancy : public Error {
 public:
  using Error::Error;
};

}  // namespace reluinv
