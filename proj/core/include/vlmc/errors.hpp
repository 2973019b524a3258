#pragma once

#include <stdexcept>
#include <string>

namespace vlmc {

// Input violates a model invariant (suffix property, non-nullness, caps, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Theorem-level preconditions (depth, delta window, sample size) not met.
class AdmissibilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed file content or unreadable/unwritable path.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vlmc
