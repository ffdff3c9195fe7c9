#pragma once

#include <stdexcept>
#include <string>

namespace qdis {

// Caller supplied something outside an operation's preconditions
// (dimension mismatch, bad index, non-coprime generator, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value that should hold by construction did not (non-unit norm after a
// unitary, negative probability beyond round-off, non-orthogonal basis).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qdis
