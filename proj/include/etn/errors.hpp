#ifndef ETN_ERRORS_HPP
#define ETN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace etn {

/// Nonconforming matrix dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values, negative probabilities, degenerate denominators.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// API misuse (e.g. backward on a non-scalar node).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid task specs or configurations; message lists all violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input files; message names the offending line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation does not apply to the trained variant (e.g. weight summary
/// for a run without transferability weights).
class NotApplicableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace etn

#endif  // ETN_ERRORS_HPP
