#pragma once

#include <stdexcept>
#include <string>

namespace neretin {

/// Malformed input data (bad image table, incomplete antichain, bad JSON).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed input that violates an operation's precondition.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested computation exceeds a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace neretin
