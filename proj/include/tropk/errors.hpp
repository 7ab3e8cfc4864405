#pragma once

#include <stdexcept>
#include <string>

namespace tropk {

// A point or function does not live on the expected grid.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An operation was called on input violating its documented precondition
// (non-tpsd kernel, asymmetric kernel, non-idempotent kernel, ...).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Combinatorial or memory guard tripped.
class size_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace tropk
