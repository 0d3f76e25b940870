#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rose {

enum class ErrorKind {
  DimensionMismatch,
  NonFiniteValue,
  ZeroVarianceColumn,
  InvalidArgument,
  BoundaryActive,
  NonFinite,
  InvalidSplit,
  SingularHessian,
  DegenerateVariance,
  ZeroNewtonDenominator,
  SolverFailure,
  DomainError,
  AllRepsFailed,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `index` carries the offending row,
/// column or coordinate when the error is tied to one, otherwise -1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long index = -1)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

}  // namespace rose
