#pragma once

#include <stdexcept>
#include <string>

namespace krylovlab {

/// Input violates a numerical precondition (norm, Hermiticity, trace, sign).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input has the wrong shape: bad party index, empty cut, dimension mismatch.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed result broke an invariant it is required to satisfy.
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace krylovlab
