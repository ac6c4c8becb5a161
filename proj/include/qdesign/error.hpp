#pragma once

#include <stdexcept>
#include <string>

namespace qd {

/// Argument outside the mathematical domain of an operation (e.g. t outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input data: unsorted grids, non-finite values, overlapping intervals.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Well-formed input that violates an operation's precondition (e.g. Q(0) > 0).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical procedure could not produce a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qd
