#pragma once

#include <string>
#include <vector>

#include "sagesimplex/core.hpp"
#include "sagesimplex/geometry.hpp"
#include "sagesimplex/solver.hpp"

namespace sagesimplex {

/// One circuit summand: coefficients over A plus the single negative term.
struct CircuitPart {
  Vector beta;
  double d = 0.0;
  Vector c;  // over A

  Signomial signomial(const std::vector<Vector>& A) const;
};

struct SplitStep {
  Vector beta;
  Vector v_star;
  Vector y_star;
  double gamma = 0.0;
  double gap = 0.0;
  bool attained = true;
};

struct Decomposition {
  int dimension = 0;
  std::vector<Vector> A;
  std::size_t anchor = 0;
  /// In peel order; the last entry is the final remainder.
  std::vector<CircuitPart> parts;
  std::vector<SplitStep> steps;
  double epsilon_used = 0.0;
  /// True when the region's affine equations were used to clear A-terms absent from f.
  bool canonicalized = false;
  std::vector<std::string> warnings;

  Signomial part_signomial(std::size_t i) const { return parts.at(i).signomial(A); }
  /// Sum of all parts as a signomial.
  Signomial total() const;
  bool nonnegative_coefficients(double tol = 0.0) const;
};

struct FenchelSplit {
  CircuitPart part;
  /// Remaining objective with beta_0 removed.
  MomentObjective remainder;
  std::vector<Vector> remainder_betas;
  SplitStep step;
};

/// Splits off the circuit part of beta_{j0} by a tangent plane of the concave
/// term at the minimizer of g over Y. The part is nonnegative on the whole
/// orthant; the remainder is nonnegative on Y up to the solver gap.
FenchelSplit fenchel_split(const MomentObjective& g, const std::vector<Vector>& betas, std::size_t j0,
                           const MomentRegion& Y, double tol = 1e-6);

struct DecomposeOptions {
  double epsilon = 0.0;
  double tol = 1e-6;
  bool canonicalize = true;
};

struct DecomposeResult {
  bool ok = false;
  Decomposition dec;
  std::string failure;
  /// Minimum of f over Y before splitting.
  double moment_min = 0.0;
  Vector violating_v;
};

/// Peels f into one nonnegative circuit part per negative term. Requires an
/// eligible instance whose moment minimum over Y is at least -epsilon.
DecomposeResult decompose(const Signomial& f, const SupportPartition& part, const MomentRegion& Y,
                          const DecomposeOptions& opt = {});

struct DecompositionReport {
  bool pass = true;
  double resummation_error = 0.0;
  bool structure_ok = true;
  /// Smallest sampled part value over X (or over the preimages of Y's atoms).
  double worst_sampled_min = kInf;
  /// Smallest part minimum over Y in moment coordinates.
  double worst_moment_min = kInf;
  std::vector<std::string> issues;
};

/// Re-checks a decomposition from scratch. X may be null when the region is
/// only known in moment coordinates.
DecompositionReport verify_decomposition(const Decomposition& dec, const Signomial& f,
                                         const MomentRegion& Y, const ConvexRegion* X,
                                         int n_samples = 2000);

}  // namespace sagesimplex
