#pragma once

#include <stdexcept>
#include <string>

namespace seqlocal {

/// Malformed input: wrong tensor length, bad dimensions, unparsable file, missing history entry.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed object fails a constraint that an operation requires as precondition.
class ConstraintViolation : public std::runtime_error {
 public:
  ConstraintViolation(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace seqlocal
