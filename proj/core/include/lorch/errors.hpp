#pragma once

#include <stdexcept>
#include <string>

#include "lorch/types.hpp"

namespace lorch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Element has no multiplicative inverse at the working tolerance.
struct SingularElement : Error {
  double det;
  explicit SingularElement(double det_)
      : Error("singular element: |det R(a)| = " + std::to_string(det_)), det(det_) {}
};

struct UnsupportedAlgebra : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  int column;
  std::string expected;
  ParseError(int line_, int col_, const std::string& expected_, const std::string& got)
      : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
              ": expected " + expected_ + ", got " + got),
        line(line_), column(col_), expected(expected_) {}
};

struct ArityError : Error {
  using Error::Error;
};

/// Evaluation left the domain of a component (division by zero, log of a
/// non-positive value, ...). `where` prints the offending subexpression.
struct DomainError : Error {
  std::string where;
  DomainError(const std::string& what_, const std::string& where_)
      : Error(what_ + " in `" + where_ + "`"), where(where_) {}
};

struct NotAlgebrizable : Error {
  double residual;
  explicit NotAlgebrizable(double residual_)
      : Error("Jacobian is not in the representation span: residual = " +
              std::to_string(residual_)),
        residual(residual_) {}
};

struct NoAlgebraFound : Error {
  using Error::Error;
};

struct PathThroughSingularSet : Error {
  Vec blocking_point;
  explicit PathThroughSingularSet(const Vec& p)
      : Error("no admissible integration path found; blocked near a singular point"),
        blocking_point(p) {}
};

struct NonConvergence : Error {
  using Error::Error;
};

struct NewtonDivergence : Error {
  Vec last_iterate;
  double residual;
  NewtonDivergence(const Vec& x, double r)
      : Error("Newton iteration did not converge: residual = " + std::to_string(r)),
        last_iterate(x), residual(r) {}
};

struct StepTooLarge : Error {
  double error_estimate;
  explicit StepTooLarge(double err)
      : Error("local truncation error estimate " + std::to_string(err) +
              " exceeds the step-doubling bound"),
        error_estimate(err) {}
};

}  // namespace lorch
