#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sagesimplex/core.hpp"
#include "sagesimplex/geometry.hpp"

namespace sagesimplex {

enum class SolveStatus { Converged, BudgetExhausted, Diverged };
std::string to_string(SolveStatus s);

struct SolveReport {
  Vector minimizer;
  double value = 0.0;
  /// Frank-Wolfe gap, complementarity residual, or bracket width.
  double gap = kInf;
  int iterations = 0;
  SolveStatus status = SolveStatus::BudgetExhausted;
  /// Objective value after each iteration.
  std::vector<double> trace;
};

struct PowerConePoint {
  Vector x;
  double z = 0.0;
  Vector lambda;
};

/// prod x_i^lambda_i >= |z|, tested in log space.
bool powercone_contains(const PowerConePoint& p, double tol = 1e-9);

struct SmoothFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;  // optional
};

struct FwOptions {
  double tol = 1e-6;
  int max_iter = 10000;
  std::size_t away_atom_limit = 10000;
};

/// Frank-Wolfe over conv(atoms) with exact line search, away steps for small
/// atom sets. Atoms are columns.
SolveReport minimize_fw(const SmoothFunction& F, const Matrix& atoms, const FwOptions& opt = {});
SolveReport minimize_fw(const SmoothFunction& F, const MomentRegion& Y, const FwOptions& opt = {});

struct Options1D {
  double tol = 1e-8;
  int max_iter = 500;
  int max_expansions = 60;
};

/// Minimizes a convex (unimodal suffices) function on an interval. Half-infinite
/// and infinite intervals are bracketed by geometric expansion first. With a
/// derivative, bisection on its sign replaces golden section.
SolveReport minimize_1d(const std::function<double(double)>& F, const Interval1D& X,
                        const Options1D& opt = {},
                        const std::function<double(double)>& dF = nullptr);

/// min over nu >= 0 of sigma_X(sum nu_a (beta - a)) + D(nu, e c).
/// Solved through the dual problem  min_{x in X} sum c_a exp<a - beta, x>,
/// whose minimizer gives nu_a = c_a exp<a - beta, x*>. `gap` bounds the
/// distance of `value` from the true minimum.
SolveReport minimize_entropy_sigma(const Vector& c, const Vector& beta, const std::vector<Vector>& A,
                                   const ConvexRegion& X, double tol = 1e-9);

struct EntropySolve {
  SolveReport report;
  /// Weights u >= 0 with inf_x sum c'_a exp<a - beta, x> <= <u, c'> for all
  /// c' >= 0, tight at c when the inner minimum is attained.
  Vector cut;
};

/// minimize_entropy_sigma plus the linear upper model of its dual value.
EntropySolve solve_entropy_sigma(const Vector& c, const Vector& beta, const std::vector<Vector>& A,
                                 const ConvexRegion& X, double tol = 1e-9);

/// The convex objective F(v) = sum c_a v_a + sum d_b prod v^lambda_b in anchored
/// moment coordinates (v_anchor = 1).
struct MomentObjective {
  Vector c;                      // over A
  std::vector<double> d;         // over B
  std::vector<Vector> lambda;    // over A, one per beta
  std::size_t anchor = 0;
  std::vector<std::size_t> coords;  // A-index of each moment coordinate

  double value(const Vector& v) const;
  Vector gradient(const Vector& v) const;
  Matrix hessian(const Vector& v) const;
  /// prod v^lambda_b for one beta.
  double monomial(std::size_t j, const Vector& v) const;
  Vector monomial_gradient(std::size_t j, const Vector& v) const;
  SmoothFunction as_function() const;
};

MomentObjective moment_objective(const SupportPartition& part, std::size_t anchor);

struct MomentReport {
  SolveReport solve;
  Vector v;       // minimizer in moment coordinates
  Vector z;       // z_b = prod v^lambda_b
  Vector x;       // recovered point, empty when v is not in the image
  double f_value = 0.0;  // f at x, value * exp<anchor, x>
  bool attained = true;
};

struct MomentOptions {
  double tol = 1e-6;
  int max_iter = 10000;
};

/// Minimizes a moment objective over Y: Frank-Wolfe on atoms, damped Newton on
/// the open orthant. The orthant gap is the complementarity residual.
SolveReport minimize_moment(const MomentObjective& obj, const MomentRegion& Y,
                            const MomentOptions& opt = {});

/// Minimizes f over Y in moment coordinates. Requires an eligible instance.
MomentReport moment_program(const Signomial& f, const SupportPartition& part, const MomentRegion& Y,
                            const MomentOptions& opt = {});

/// sigma_X(sum nu_a (beta - a)) + D(nu, e c), evaluated exactly.
double entropy_sigma_objective(const Vector& c, const Vector& beta, const std::vector<Vector>& A,
                               const ConvexRegion& X, const Vector& nu);

/// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& y);

}  // namespace sagesimplex
