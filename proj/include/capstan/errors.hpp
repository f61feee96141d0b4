#ifndef CAPSTAN_ERRORS_HPP_
#define CAPSTAN_ERRORS_HPP_

#include <limits>
#include <stdexcept>
#include <string>

namespace capstan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative mu, non-unit direction, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid geometric configuration: overlapping disks, infeasible tangents, zero-sweep contacts.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// No solution satisfies the constraints. `best_value` carries the best attained
/// margin (planner) or residual (allocation); NaN when nothing was attained.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what,
                           double best_value = std::numeric_limits<double>::quiet_NaN())
      : Error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

/// Missing key in a lookup table (unknown surface class, unknown capstan id).
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Precondition violation on user-supplied data (empty sets, nonpositive tensions).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace capstan

#endif  // CAPSTAN_ERRORS_HPP_
