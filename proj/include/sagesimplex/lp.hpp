#pragma once

#include "sagesimplex/core.hpp"

namespace sagesimplex::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::IterationLimit;
  Vector x;
  double value = 0.0;
};

/// Dense two-phase simplex for  min c'x  s.t.  Ax = b, x >= 0.
/// Bland's rule, so it terminates; meant for the small programs used here.
Result solve_standard(const Matrix& A, const Vector& b, const Vector& c, int max_pivots = 50000);

/// min c'x  s.t.  A x <= b, x >= 0 (any sign of b).
Result solve_inequality(const Matrix& A, const Vector& b, const Vector& c, int max_pivots = 50000);

}  // namespace sagesimplex::lp
