#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sagesimplex/core.hpp"
#include "sagesimplex/decompose.hpp"
#include "sagesimplex/geometry.hpp"

namespace sagesimplex {

/// Number of sign flips in a coefficient sequence, zeros skipped.
int sign_changes(const std::vector<double>& coefficients);
/// Sign flips of a univariate signomial's coefficients ordered by exponent.
int sign_changes(const Signomial& f);

struct RootEstimate {
  double x = 0.0;
  int multiplicity = 1;
};

/// Descartes' bound: the total multiplicity of the roots is at most the
/// number of sign changes.
bool count_roots_bound_check(const Signomial& f, const std::vector<RootEstimate>& roots);

struct SeparationWitness {
  double beta1 = 0.0;
  double alpha = 0.0;
  double beta2 = 0.0;
};

/// Some alpha strictly between two elements of B. The witness uses the nearest
/// beta on each side of the first such alpha.
std::optional<SeparationWitness> separates(const std::vector<double>& A, const std::vector<double>& B);

struct UnivariateInstance {
  double alpha1 = 0.0;
  double alpha2 = 1.0;
  std::vector<double> B;
  Interval1D X;
};

/// Throws InputError unless alpha1 < alpha2, B is strictly increasing and
/// disjoint from the alphas, and X is a nonempty interval.
void validate_instance(const UnivariateInstance& inst);

struct CoincidenceVerdict {
  bool coincide = true;
  std::string reason;
  RecessionDual1D cones{Cone1D::Zero, Cone1D::Zero};
  /// [alpha1, alpha2] - rec(X)*.
  Interval1D admissible;
  std::optional<SeparationWitness> witness;
  /// Betas outside the admissible interval.
  std::vector<double> outside;
};

/// Decides whether the X-SAGE cone on {alpha1, alpha2} and B equals the cone
/// of signomials on that support that are nonnegative on X.
CoincidenceVerdict cone_coincidence(const UnivariateInstance& inst);

struct ProportionalSplit {
  bool ok = false;
  std::string failure;
  Decomposition dec;
  /// Weight of each beta in B order; they sum to one.
  std::vector<double> weights;
  double f_at_a = 0.0;
};

/// Splits f = c1 e^a1 + c2 e^a2 + sum d_b e^b over X = [a, ...] by giving each
/// beta the share -d_b e^{b a} / sum(-d e^{. a}) of c1 and c2. Requires f to be
/// minimized at a.
ProportionalSplit proportional_split_1d(const Signomial& f, const Interval1D& X);

struct Counterexample {
  Signomial f;
  double c1 = 0.0, c2 = 0.0, d1 = 0.0, d2 = 0.0;
  /// Where the tail attains its infimum, i.e. the zero of f on cl X.
  double zero = 0.0;
};

/// A signomial on {alpha1, alpha2, beta1, beta2} that is nonnegative on X but
/// outside the X-SAGE cone. Needs beta1 < alpha1 < beta2 < alpha2, inf X finite
/// and b in X other than inf X.
Counterexample counterexample(double alpha1, double alpha2, double beta1, double beta2,
                              const Interval1D& X, double b);

}  // namespace sagesimplex
