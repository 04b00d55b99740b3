#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sagesimplex/core.hpp"
#include "sagesimplex/decompose.hpp"
#include "sagesimplex/geometry.hpp"
#include "sagesimplex/solver.hpp"

namespace sagesimplex {

/// D(u, v) = sum u_i ln(u_i / v_i) with 0 ln 0 = 0. Returns +inf when some
/// u_i > 0 meets v_i = 0.
double relative_entropy(const Vector& u, const Vector& v);

/// prod over lambda_a > 0 of (c_a / lambda_a)^lambda_a, in log space. Zero when
/// some c_a = 0 has lambda_a > 0.
double circuit_number(const Vector& c, const Vector& lambda);

struct AgeCertificate {
  Vector beta;
  double d = 0.0;
  Vector c;  // over A
  Vector nu;
  double entropy_value = 0.0;
  double support_value = 0.0;
  /// d - (support_value + entropy_value).
  double slack = 0.0;
  bool feasible = false;
  /// Upper bound on how far entropy + support is from its minimum.
  double solver_gap = 0.0;
};

/// Closed-form global test through the circuit number.
AgeCertificate age_global(const Vector& c, double d, const Vector& beta, const std::vector<Vector>& A);

/// Constrained test: minimizes entropy + support over nu >= 0.
AgeCertificate age_constrained(const Vector& c, double d, const Vector& beta,
                               const std::vector<Vector>& A, const ConvexRegion& X);

enum class SageMode { SignedNonnegC, FreeC };

struct SageCertificate {
  std::vector<Vector> A;
  /// One entry per beta; c of each is that beta's share of f's coefficients.
  std::vector<AgeCertificate> parts;
};

struct SageOptions {
  int max_iter = 300;
  /// Stop once the upper and lower slack bounds are this close.
  double gap_tol = 1e-9;
  bool try_decomposition = true;
  int sample_depth = 20;
};

struct SageResult {
  bool found = false;
  /// Upper bound on the best achievable worst slack is negative: f is not in the cone.
  bool proven_nonmember = false;
  std::optional<SageCertificate> certificate;
  /// Free-sign decomposition (FreeC mode).
  std::optional<Decomposition> decomposition;
  /// Worst slack of the best split found (certified lower bound).
  double best_slack = -kInf;
  /// Upper bound on max over splits of the worst slack.
  double slack_upper_bound = kInf;
  int iterations = 0;
  std::string method;
  std::string note;
};

/// Searches for a split of c over B such that every beta-part passes the
/// constrained AGE test. Cutting planes on the concave per-beta slack give the
/// upper bound; exact AGE evaluation at candidate splits gives the lower bound.
SageResult sage_membership(const Signomial& f, const SupportPartition& part, const ConvexRegion& X,
                           SageMode mode = SageMode::SignedNonnegC, const SageOptions& opt = {});

struct CertificateReport {
  bool pass = true;
  double worst_slack = kInf;
  double worst_sample = kInf;
  Vector worst_point;
  std::vector<std::string> issues;
};

/// Recomputes every inequality of the certificate and spot-checks f on X.
CertificateReport verify_certificate(const SageCertificate& cert, const Signomial& f,
                                     const ConvexRegion& X, int samples = 2000);

}  // namespace sagesimplex
