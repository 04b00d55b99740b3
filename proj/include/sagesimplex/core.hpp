#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sagesimplex/errors.hpp"

namespace sagesimplex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Per-coordinate tolerance under which two exponent vectors are merged.
inline constexpr double kExponentTol = 1e-12;
/// Tolerance on barycentric reconstruction and the [0,1] box test.
inline constexpr double kBaryTol = 1e-8;
/// Coefficients below this magnitude are treated as zero.
inline constexpr double kZeroCoefficient = 1e-300;
/// Relative pivot threshold for the affine rank test.
inline constexpr double kRankThreshold = 1e-9;
/// Absolute slack allowed on every certificate inequality.
inline constexpr double kCertTol = 1e-7;
/// A sampled value below -kEvalTol counts as a violation.
inline constexpr double kEvalTol = 1e-9;

/// One term c * exp<alpha, x>.
struct Term {
  double coefficient = 0.0;
  Vector exponent;
};

bool same_exponent(const Vector& a, const Vector& b, double tol = kExponentTol);

/// A finite exponential sum. Exponents are pairwise distinct (within
/// kExponentTol) and no stored coefficient is zero.
class Signomial {
 public:
  Signomial() = default;
  Signomial(int dimension, std::vector<Term> terms);

  static Signomial constant(int dimension, double value);

  int dimension() const { return dimension_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double operator()(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  /// Coefficient of exp<alpha, .>, zero when alpha is not in the support.
  double coefficient(const Vector& alpha) const;

  Signomial operator+(const Signomial& other) const;
  Signomial operator-(const Signomial& other) const;
  Signomial operator*(double s) const;
  /// Adds `value` to the coefficient of exp<alpha, .>.
  Signomial plus_term(double value, const Vector& alpha) const;

 private:
  int dimension_ = 0;
  std::vector<Term> terms_;
};

double evaluate(const Signomial& f, const Vector& x);

struct Barycentric {
  Vector lambda;
  /// True when every entry lies in [0,1] within kBaryTol.
  bool in_hull = false;
  /// True when at least one entry was within tolerance of the box and clamped.
  bool clamped = false;
  double residual = 0.0;
};

/// Rank of {alpha - alpha_0}, via column-pivoted QR.
int affine_rank(const std::vector<Vector>& points);
bool affinely_independent(const std::vector<Vector>& points);

/// Barycentric coordinates of beta with respect to the affinely independent
/// set A. Throws StructureError when beta is outside the affine hull of A.
Barycentric barycentric(const std::vector<Vector>& A, const Vector& beta);

/// The positive/negative support split of a signomial.
struct SupportPartition {
  int dimension = 0;
  std::vector<Vector> positive;  // A
  Vector c;                      // coefficient of f at each alpha, 0 if absent
  std::vector<Vector> negative;  // B
  Vector d;                      // d_beta < 0
  std::vector<Barycentric> barycentric;

  /// Rebuilds f from the partition.
  Signomial assemble() const;
};

SupportPartition partition_support(
    const Signomial& f,
    const std::optional<std::vector<Vector>>& declared_A = std::nullopt);

struct BetaDiagnostic {
  Vector beta;
  Vector lambda;
  bool in_hull = false;
  bool not_in_A = true;
};

struct SimplexDiagnostics {
  bool affinely_independent = false;
  std::vector<BetaDiagnostic> betas;
  bool eligible = false;
  std::vector<std::string> reasons;
};

/// Checks the hypotheses of the simplex nonnegativity theorem on a partition.
SimplexDiagnostics validate_simplex_problem(const SupportPartition& part);

struct PolynomialTerm {
  double coefficient = 0.0;
  std::vector<double> exponent;
};

/// Reinterprets p(y) = sum c y^a as sum c exp<a, x> under y_i = exp(x_i).
/// Exponents must be nonnegative integers.
Signomial poly_to_signomial(int dimension, const std::vector<PolynomialTerm>& p);

std::string format_vector(const Vector& v);

}  // namespace sagesimplex
