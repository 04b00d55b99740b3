#include "sagesimplex/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sagesimplex/lp.hpp"

namespace sagesimplex {

namespace {

// An upper bound this far below zero counts as a proof of non-membership.
constexpr double kNonmemberMargin = 1e-6;

Vector balance_direction(const Vector& nu, const Vector& beta, const std::vector<Vector>& A) {
  Vector y = Vector::Zero(beta.size());
  for (std::size_t i = 0; i < A.size(); ++i) y += nu[static_cast<Eigen::Index>(i)] * (beta - A[i]);
  return y;
}

AgeCertificate finish(AgeCertificate cert, const ConvexRegion& X, const std::vector<Vector>& A) {
  cert.entropy_value = relative_entropy(cert.nu, std::numbers::e * cert.c);
  cert.support_value = support_function(X, balance_direction(cert.nu, cert.beta, A));
  cert.slack = cert.d - (cert.support_value + cert.entropy_value);
  cert.feasible = std::isfinite(cert.slack) && cert.slack >= -kCertTol;
  return cert;
}

AgeCertificate trivial_age(const Vector& c, double d, const Vector& beta) {
  AgeCertificate cert;
  cert.beta = beta;
  cert.d = d;
  cert.c = c;
  cert.nu = Vector::Zero(c.size());
  cert.slack = d;
  cert.feasible = d >= -kCertTol;
  return cert;
}

struct BetaEval {
  AgeCertificate cert;
  Vector cut;
};

BetaEval evaluate_beta(const Vector& c, double d, const Vector& beta, const std::vector<Vector>& A,
                       const ConvexRegion& X) {
  Vector cc = c.cwiseMax(0.0);
  EntropySolve es = solve_entropy_sigma(cc, beta, A, X);
  AgeCertificate cert;
  cert.beta = beta;
  cert.d = d;
  cert.c = cc;
  cert.nu = es.report.minimizer;
  cert.solver_gap = es.report.gap;
  cert = finish(std::move(cert), X, A);
  if (!std::isfinite(cert.slack)) {
    // The dual point escaped the domain of sigma; nu = 0 is always admissible.
    cert.nu.setZero();
    cert = finish(std::move(cert), X, A);
  }
  return {std::move(cert), std::move(es.cut)};
}

// Moment region used for the decomposition heuristic, when X has one.
std::optional<MomentRegion> candidate_region(const ConvexRegion& X, const std::vector<Vector>& A,
                                             std::size_t anchor, int depth) {
  if (std::holds_alternative<FullSpace>(X) || is_bounded(X)) {
    return build_moment_region(X, A, anchor, MomentMode::Sample, depth);
  }
  return std::nullopt;
}

// Splits over B from a free-sign decomposition, when all of it is nonnegative.
std::optional<std::vector<Vector>> split_from_decomposition(const Decomposition& dec,
                                                            const SupportPartition& part) {
  const std::size_t k = part.negative.size();
  std::vector<Vector> split(k);
  for (const auto& p : dec.parts) {
    for (std::size_t j = 0; j < k; ++j) {
      if (same_exponent(p.beta, part.negative[j])) split[j] = p.c;
    }
  }
  Vector used = Vector::Zero(part.c.size());
  for (std::size_t j = 0; j + 1 < k; ++j) {
    if (split[j].size() != part.c.size()) return std::nullopt;
    split[j] = split[j].cwiseMax(0.0);
    used += split[j];
  }
  split[k - 1] = part.c - used;
  const double tol = 1e-9 * std::max(1.0, part.c.cwiseAbs().maxCoeff());
  if ((split[k - 1].array() < -tol).any()) return std::nullopt;
  split[k - 1] = split[k - 1].cwiseMax(0.0);
  return split;
}

}  // namespace

double relative_entropy(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw InputError("relative_entropy: size mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0 || v[i] < 0.0) throw InputError("relative_entropy: negative entry");
    if (u[i] == 0.0) continue;
    if (v[i] == 0.0) return kInf;
    s += u[i] * std::log(u[i] / v[i]);
  }
  return s;
}

double circuit_number(const Vector& c, const Vector& lambda) {
  if (c.size() != lambda.size()) throw InputError("circuit_number: size mismatch");
  double log_theta = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (lambda[i] <= 0.0) continue;
    if (c[i] <= 0.0) return 0.0;
    log_theta += lambda[i] * std::log(c[i] / lambda[i]);
  }
  return std::exp(log_theta);
}

AgeCertificate age_global(const Vector& c, double d, const Vector& beta, const std::vector<Vector>& A) {
  if (c.size() != static_cast<Eigen::Index>(A.size())) throw InputError("age_global: c and A sizes differ");
  if (!affinely_independent(A)) throw StructureError("age_global: A is not affinely independent");
  AgeCertificate cert = trivial_age(c, d, beta);
  const FullSpace X{static_cast<int>(beta.size())};
  if (d >= 0.0) return finish(std::move(cert), X, A);
  if ((c.array() < 0.0).any()) {
    cert.feasible = false;
    return cert;
  }
  Barycentric bc;
  try {
    bc = barycentric(A, beta);
  } catch (const StructureError&) {
    return cert;
  }
  if (!bc.in_hull) return cert;
  const double theta = circuit_number(c, bc.lambda);
  if (theta <= 0.0) return finish(std::move(cert), X, A);
  cert.nu = theta * bc.lambda;
  cert = finish(std::move(cert), X, A);
  // sigma of a balanced direction is 0; rounding must not push it to +inf.
  if (!std::isfinite(cert.support_value)) {
    cert.support_value = 0.0;
    cert.slack = d - cert.entropy_value;
    cert.feasible = cert.slack >= -kCertTol;
  }
  return cert;
}

AgeCertificate age_constrained(const Vector& c, double d, const Vector& beta,
                               const std::vector<Vector>& A, const ConvexRegion& X) {
  if (c.size() != static_cast<Eigen::Index>(A.size())) {
    throw InputError("age_constrained: c and A sizes differ");
  }
  if ((c.array() < 0.0).any()) throw InputError("age_constrained: c must be nonnegative");
  validate_region(X);
  if (d >= 0.0) return finish(trivial_age(c, d, beta), X, A);
  BetaEval ev = evaluate_beta(c, d, beta, A, X);
  if (!std::isfinite(ev.cert.slack)) throw InternalError("age_constrained: non-finite slack");
  return ev.cert;
}

SageResult sage_membership(const Signomial& f, const SupportPartition& part, const ConvexRegion& X,
                           SageMode mode, const SageOptions& opt) {
  validate_region(X);
  if (region_dimension(X) != f.dimension()) throw InputError("sage_membership: dimension mismatch");
  SageResult res;
  const auto& A = part.positive;
  const std::size_t k = part.negative.size();
  const auto m = part.c.size();

  if (mode == SageMode::FreeC) {
    res.method = "decompose";
    const auto diag = validate_simplex_problem(part);
    if (!diag.eligible) {
      std::string why;
      for (const auto& r : diag.reasons) why += (why.empty() ? "" : "; ") + r;
      throw StructureError("free_c mode needs an eligible instance: " + why);
    }
    if (!std::holds_alternative<FullSpace>(X) && !is_bounded(X)) {
      throw UnsupportedRegionError("free_c mode needs the full space or a bounded region");
    }
    const std::size_t anchor = default_anchor(A);
    const MomentRegion Y = build_moment_region(X, A, anchor, MomentMode::Sample, opt.sample_depth);
    DecomposeResult dr = decompose(f, part, Y);
    // A split of f + epsilon does not certify f.
    res.found = dr.ok && dr.dec.epsilon_used == 0.0;
    res.best_slack = dr.moment_min;
    res.note = res.found ? "" : (dr.ok ? "decomposition needed epsilon > 0" : dr.failure);
    if (dr.ok) res.decomposition = std::move(dr.dec);
    return res;
  }

  res.method = "kelley";
  if ((part.c.array() < 0.0).any()) {
    res.proven_nonmember = true;
    res.note = "a coefficient on A is negative";
    return res;
  }

  if (k == 0) {
    res.found = true;
    res.best_slack = kInf;
    res.certificate = SageCertificate{A, {}};
    res.method = "trivial";
    return res;
  }

  if (k == 1) {
    res.method = "age";
    BetaEval ev = evaluate_beta(part.c, part.d[0], part.negative[0], A, X);
    res.best_slack = ev.cert.slack;
    res.slack_upper_bound = part.d[0] + ev.cut.dot(part.c);
    res.found = ev.cert.feasible;
    res.proven_nonmember = res.slack_upper_bound < -kNonmemberMargin;
    if (res.found) res.certificate = SageCertificate{A, {std::move(ev.cert)}};
    res.iterations = 1;
    return res;
  }

  // Cutting planes on max_split min_j slack_j. Variables: t' = t - t0 and the
  // splits of the first k-1 betas; the last split is c minus the others.
  const double t0 = part.d.minCoeff() - 1.0;
  const auto n = static_cast<Eigen::Index>(1 + (k - 1) * m);
  std::vector<std::pair<std::size_t, Vector>> cuts;

  auto evaluate_split = [&](const std::vector<Vector>& split, std::vector<AgeCertificate>& certs) {
    double worst = kInf;
    certs.clear();
    for (std::size_t j = 0; j < k; ++j) {
      BetaEval ev = evaluate_beta(split[j], part.d[j], part.negative[j], A, X);
      worst = std::min(worst, ev.cert.slack);
      cuts.emplace_back(j, std::move(ev.cut));
      certs.push_back(std::move(ev.cert));
    }
    return worst;
  };

  std::vector<Vector> best(k, part.c / static_cast<double>(k));
  std::vector<AgeCertificate> best_certs;
  res.best_slack = evaluate_split(best, best_certs);

  if (opt.try_decomposition && validate_simplex_problem(part).eligible) {
    try {
      if (auto Y = candidate_region(X, A, default_anchor(A), opt.sample_depth)) {
        DecomposeResult dr = decompose(f, part, *Y);
        if (dr.ok) {
          if (auto split = split_from_decomposition(dr.dec, part)) {
            std::vector<AgeCertificate> certs;
            const double s = evaluate_split(*split, certs);
            if (s > res.best_slack) {
              res.best_slack = s;
              best = std::move(*split);
              best_certs = std::move(certs);
              res.method = "kelley+decompose";
            }
          }
        }
      }
    } catch (const Error&) {
      // The heuristic start is optional.
    }
  }

  bool last_improved = true;
  for (int it = 0; it < opt.max_iter; ++it) {
    res.iterations = it + 1;
    if (res.best_slack >= -kCertTol) break;

    const auto rows = static_cast<Eigen::Index>(m + cuts.size());
    Matrix M = Matrix::Zero(rows, n);
    Vector b(rows);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (std::size_t j = 0; j + 1 < k; ++j) M(a, 1 + static_cast<Eigen::Index>(j) * m + a) = 1.0;
      b[a] = part.c[a];
    }
    for (std::size_t r = 0; r < cuts.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(m + r);
      const auto& [j, u] = cuts[r];
      M(row, 0) = 1.0;
      if (j + 1 < k) {
        M.block(row, 1 + static_cast<Eigen::Index>(j) * m, 1, m) = -u.transpose();
        b[row] = part.d[j] - t0;
      } else {
        for (std::size_t i = 0; i + 1 < k; ++i) {
          M.block(row, 1 + static_cast<Eigen::Index>(i) * m, 1, m) = u.transpose();
        }
        b[row] = part.d[j] - t0 + u.dot(part.c);
      }
    }
    Vector obj = Vector::Zero(n);
    obj[0] = -1.0;
    const lp::Result lr = lp::solve_inequality(M, b, obj);
    if (lr.status != lp::Status::Optimal) {
      res.note = "cutting-plane LP did not solve";
      break;
    }
    res.slack_upper_bound = std::min(res.slack_upper_bound, lr.x[0] + t0);
    if (res.slack_upper_bound < -kNonmemberMargin) break;
    if (res.slack_upper_bound - res.best_slack <= opt.gap_tol * (1.0 + std::abs(res.slack_upper_bound))) {
      break;
    }

    std::vector<Vector> lp_split(k);
    Vector used = Vector::Zero(m);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      lp_split[j] = lr.x.segment(1 + static_cast<Eigen::Index>(j) * m, m).cwiseMax(0.0);
      used += lp_split[j];
    }
    lp_split[k - 1] = (part.c - used).cwiseMax(0.0);

    std::vector<Vector> query(k);
    for (std::size_t j = 0; j < k; ++j) {
      query[j] = last_improved ? Vector(0.5 * (lp_split[j] + best[j])) : lp_split[j];
    }
    std::vector<AgeCertificate> certs;
    const double s = evaluate_split(query, certs);
    last_improved = s > res.best_slack;
    if (last_improved) {
      res.best_slack = s;
      best = std::move(query);
      best_certs = std::move(certs);
    }
  }

  res.found = res.best_slack >= -kCertTol;
  res.proven_nonmember = res.slack_upper_bound < -kNonmemberMargin;
  if (res.found) res.certificate = SageCertificate{A, std::move(best_certs)};
  return res;
}

CertificateReport verify_certificate(const SageCertificate& cert, const Signomial& f,
                                     const ConvexRegion& X, int samples) {
  CertificateReport rep;
  validate_region(X);
  const auto& A = cert.A;
  const auto m = static_cast<Eigen::Index>(A.size());
  auto fail = [&](const std::string& msg) {
    rep.pass = false;
    rep.issues.push_back(msg);
  };

  Vector total = Vector::Zero(m);
  for (const auto& p : cert.parts) {
    const std::string tag = "beta " + format_vector(p.beta);
    if (p.c.size() != m || p.nu.size() != m) {
      fail(tag + ": size mismatch");
      continue;
    }
    if ((p.c.array() < -kCertTol).any()) fail(tag + ": negative coefficient in split");
    if ((p.nu.array() < -kCertTol).any()) fail(tag + ": negative nu");
    total += p.c;
    const double D = relative_entropy(p.nu.cwiseMax(0.0), std::numbers::e * p.c.cwiseMax(0.0));
    const double s = support_function(X, balance_direction(p.nu, p.beta, A));
    const double slack = p.d - (s + D);
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (!(slack >= -kCertTol)) {
      std::ostringstream os;
      os << tag << ": slack " << slack << " below -" << kCertTol;
      fail(os.str());
    }
    if (std::abs(p.d - f.coefficient(p.beta)) > kCertTol * std::max(1.0, std::abs(p.d))) {
      fail(tag + ": d does not match f");
    }
  }

  if (cert.parts.empty()) {
    // No negative terms: f itself must have nonnegative coefficients.
    for (const auto& t : f.terms()) {
      if (t.coefficient < -kCertTol) fail("negative term at " + format_vector(t.exponent) + " without a certificate");
    }
  }
  for (Eigen::Index i = 0; i < m && !cert.parts.empty(); ++i) {
    const double want = f.coefficient(A[static_cast<std::size_t>(i)]);
    if (std::abs(total[i] - want) > kCertTol * std::max(1.0, std::abs(want))) {
      fail("coefficient sum at " + format_vector(A[static_cast<std::size_t>(i)]) + " does not match f");
    }
  }
  for (const auto& t : f.terms()) {
    const bool in_A = std::any_of(A.begin(), A.end(), [&](const Vector& a) { return same_exponent(a, t.exponent); });
    if (in_A) continue;
    const bool covered = std::any_of(cert.parts.begin(), cert.parts.end(),
                                     [&](const AgeCertificate& p) { return same_exponent(p.beta, t.exponent); });
    if (!covered) fail("term at " + format_vector(t.exponent) + " is not covered");
  }

  for (const auto& x : spot_points(X, samples)) {
    double slack_allowance = 0.0, scale = 0.0;
    for (const auto& p : cert.parts) slack_allowance += std::max(0.0, -p.slack) * std::exp(p.beta.dot(x));
    for (const auto& t : f.terms()) scale += std::abs(t.coefficient) * std::exp(t.exponent.dot(x));
    const double fx = f(x);
    if (fx < rep.worst_sample) {
      rep.worst_sample = fx;
      rep.worst_point = x;
    }
    if (fx < -kEvalTol * std::max(1.0, scale) - slack_allowance) {
      fail("f is negative at " + format_vector(x));
      break;
    }
  }
  return rep;
}

}  // namespace sagesimplex
