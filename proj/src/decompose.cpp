#include "sagesimplex/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sagesimplex {

namespace {

MomentObjective part_objective(const CircuitPart& p, const Vector& lambda, std::size_t anchor,
                               std::size_t size) {
  MomentObjective obj;
  obj.c = p.c;
  obj.d = {p.d};
  obj.lambda = {lambda};
  obj.anchor = anchor;
  obj.coords = moment_indices(size, anchor);
  return obj;
}

// Uses the affine equations E v = e of Y to clear coefficients of A-terms that
// f does not contain, last index first. Parts other than the last are shifted;
// the caller recomputes the last one.
bool canonicalize(std::vector<CircuitPart>& parts, const Vector& fc, const MomentRegion& Y) {
  const AffineHull hull = atom_affine_hull(Y);
  if (hull.E.rows() == 0 || parts.size() < 2) return false;
  const auto coords = moment_indices(Y.A.size(), Y.anchor);
  std::vector<Eigen::Index> pivots;
  for (auto k = static_cast<Eigen::Index>(coords.size()); k-- > 0;) {
    if (fc[static_cast<Eigen::Index>(coords[k])] != 0.0) continue;
    std::vector<Eigen::Index> trial = pivots;
    trial.push_back(k);
    Matrix sub(hull.E.rows(), static_cast<Eigen::Index>(trial.size()));
    for (std::size_t i = 0; i < trial.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = hull.E.col(trial[i]);
    Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    qr.setThreshold(1e-9);
    if (qr.rank() == static_cast<Eigen::Index>(trial.size())) pivots = trial;
    if (static_cast<Eigen::Index>(pivots.size()) == hull.E.rows()) break;
  }
  if (pivots.empty()) return false;
  Matrix EP(hull.E.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (std::size_t i = 0; i < pivots.size(); ++i) EP.col(static_cast<Eigen::Index>(i)) = hull.E.col(pivots[i]);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(EP.transpose());
  for (std::size_t p = 0; p + 1 < parts.size(); ++p) {
    Vector y(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t k = 0; k < coords.size(); ++k) y[static_cast<Eigen::Index>(k)] = parts[p].c[static_cast<Eigen::Index>(coords[k])];
    Vector yp(static_cast<Eigen::Index>(pivots.size()));
    for (std::size_t i = 0; i < pivots.size(); ++i) yp[static_cast<Eigen::Index>(i)] = y[pivots[i]];
    const Vector mu = cod.solve(-yp);
    y += hull.E.transpose() * mu;
    for (auto k : pivots) y[k] = 0.0;
    for (std::size_t k = 0; k < coords.size(); ++k) parts[p].c[static_cast<Eigen::Index>(coords[k])] = y[static_cast<Eigen::Index>(k)];
    parts[p].c[static_cast<Eigen::Index>(Y.anchor)] -= mu.dot(hull.e);
  }
  return true;
}

}  // namespace

Signomial CircuitPart::signomial(const std::vector<Vector>& A) const {
  std::vector<Term> terms;
  const int n = static_cast<int>(beta.size());
  for (std::size_t i = 0; i < A.size(); ++i) terms.push_back({c[static_cast<Eigen::Index>(i)], A[i]});
  terms.push_back({d, beta});
  return Signomial(n, std::move(terms));
}

Signomial Decomposition::total() const {
  std::vector<Term> terms;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < A.size(); ++i) terms.push_back({p.c[static_cast<Eigen::Index>(i)], A[i]});
    terms.push_back({p.d, p.beta});
  }
  return Signomial(dimension, std::move(terms));
}

bool Decomposition::nonnegative_coefficients(double tol) const {
  for (const auto& p : parts) {
    if (p.c.size() && p.c.minCoeff() < -tol) return false;
  }
  return true;
}

FenchelSplit fenchel_split(const MomentObjective& g, const std::vector<Vector>& betas, std::size_t j0,
                           const MomentRegion& Y, double tol) {
  if (j0 >= g.d.size() || betas.size() != g.d.size()) throw InputError("fenchel_split: bad beta index");
  for (double d : g.d) {
    if (!(d < 0.0)) throw InputError("fenchel_split: every d_beta must be negative");
  }
  MomentOptions mo;
  mo.tol = tol;
  const SolveReport rep = minimize_moment(g, Y, mo);

  FenchelSplit out;
  out.step.beta = betas[j0];
  out.step.gap = rep.gap;
  out.step.attained = rep.status == SolveStatus::Converged;
  Vector v = rep.minimizer;
  if (v.size() && v.minCoeff() <= 0.0) {
    out.step.attained = false;
    v = v.cwiseMax(1e-12);
  }
  out.step.v_star = v;

  const double d0 = g.d[j0];
  const double z = g.monomial(j0, v);
  const Vector y = -d0 * g.monomial_gradient(j0, v);
  const double gamma = -d0 * z - y.dot(v);
  out.step.y_star = y;
  out.step.gamma = gamma;

  out.part.beta = betas[j0];
  out.part.d = d0;
  if (g.d.size() == 1) {
    out.part.c = g.c;
  } else {
    out.part.c = Vector::Zero(g.c.size());
    out.part.c[static_cast<Eigen::Index>(g.anchor)] = gamma;
    for (std::size_t k = 0; k < g.coords.size(); ++k) {
      out.part.c[static_cast<Eigen::Index>(g.coords[k])] = y[static_cast<Eigen::Index>(k)];
    }
  }

  out.remainder.anchor = g.anchor;
  out.remainder.coords = g.coords;
  out.remainder.c = g.c - out.part.c;
  for (std::size_t j = 0; j < g.d.size(); ++j) {
    if (j == j0) continue;
    out.remainder.d.push_back(g.d[j]);
    out.remainder.lambda.push_back(g.lambda[j]);
    out.remainder_betas.push_back(betas[j]);
  }
  return out;
}

DecomposeResult decompose(const Signomial& f, const SupportPartition& part, const MomentRegion& Y,
                          const DecomposeOptions& opt) {
  const auto diag = validate_simplex_problem(part);
  if (!diag.eligible) {
    std::string why;
    for (const auto& r : diag.reasons) why += (why.empty() ? "" : "; ") + r;
    throw StructureError("instance is not eligible for decomposition: " + why);
  }
  if (Y.A.size() != part.positive.size()) throw InputError("moment region was built for a different A");
  for (std::size_t i = 0; i < Y.A.size(); ++i) {
    if (!same_exponent(Y.A[i], part.positive[i])) throw InputError("moment region was built for a different A");
  }

  DecomposeResult res;
  res.dec.dimension = f.dimension();
  res.dec.A = part.positive;
  res.dec.anchor = Y.anchor;

  const MomentObjective full = moment_objective(part, Y.anchor);
  MomentOptions mo;
  mo.tol = opt.tol;
  const SolveReport pre = minimize_moment(full, Y, mo);
  res.moment_min = pre.value;
  if (pre.value < -opt.epsilon - kCertTol) {
    res.failure = "f is negative on Y: moment minimum " + std::to_string(pre.value) + " at v = " +
                  format_vector(pre.minimizer);
    res.violating_v = pre.minimizer;
    return res;
  }
  if (part.negative.empty()) {
    res.ok = true;
    res.dec.warnings.push_back("no negative terms; f is its own certificate");
    return res;
  }

  // Peel order: decreasing |d_beta| * prod(reference)^lambda.
  Vector ref;
  if (Y.kind == MomentKind::PositiveOrthantImage) {
    ref = pre.minimizer.cwiseMax(1e-12);
  } else {
    ref = Y.atoms.rowwise().mean();
  }
  std::vector<std::size_t> order(part.negative.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) score[j] = std::abs(full.d[j]) * full.monomial(j, ref);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  MomentObjective ordered = full;
  std::vector<Vector> betas;
  ordered.d.clear();
  ordered.lambda.clear();
  for (auto j : order) {
    ordered.d.push_back(full.d[j]);
    ordered.lambda.push_back(full.lambda[j]);
    betas.push_back(part.negative[j]);
  }

  std::vector<double> schedule = {0.0};
  for (double e = 1e-9; e <= opt.epsilon * (1.0 + 1e-12); e *= 2.0) schedule.push_back(e);
  if (opt.epsilon > 0.0 && schedule.back() < opt.epsilon) schedule.push_back(opt.epsilon);

  Decomposition last;
  std::string last_issue;
  for (double eps : schedule) {
    Decomposition dec;
    dec.dimension = f.dimension();
    dec.A = part.positive;
    dec.anchor = Y.anchor;
    dec.epsilon_used = eps;

    MomentObjective g = ordered;
    g.c[static_cast<Eigen::Index>(Y.anchor)] += eps;
    std::vector<Vector> bs = betas;
    std::vector<Vector> part_lambda;
    while (g.d.size() > 1) {
      auto split = fenchel_split(g, bs, 0, Y, opt.tol);
      if (!split.step.attained || split.step.gap > opt.tol) {
        dec.warnings.push_back("attainment: split at beta " + format_vector(split.step.beta) +
                               " has gap " + std::to_string(split.step.gap));
      }
      dec.parts.push_back(split.part);
      dec.steps.push_back(split.step);
      part_lambda.push_back(g.lambda[0]);
      g = split.remainder;
      bs = split.remainder_betas;
    }
    dec.parts.push_back(CircuitPart{bs.front(), g.d.front(), g.c});
    part_lambda.push_back(g.lambda.front());

    if (opt.canonicalize && canonicalize(dec.parts, part.c, Y)) {
      dec.canonicalized = true;
      Vector rest = part.c;
      rest[static_cast<Eigen::Index>(Y.anchor)] += eps;
      for (std::size_t p = 0; p + 1 < dec.parts.size(); ++p) rest -= dec.parts[p].c;
      dec.parts.back().c = rest;
    }

    // Every part must be nonnegative on Y.
    bool ok = true;
    for (std::size_t p = 0; p < dec.parts.size(); ++p) {
      const auto obj = part_objective(dec.parts[p], part_lambda[p], Y.anchor, Y.A.size());
      const double m = minimize_moment(obj, Y, mo).value;
      if (m < -kCertTol) {
        ok = false;
        last_issue = "part for beta " + format_vector(dec.parts[p].beta) + " has moment minimum " +
                     std::to_string(m);
        break;
      }
    }
    if (Y.kind == MomentKind::SampledHull) {
      dec.warnings.push_back(
          "parts other than the tangent parts are certified on the sampled inner approximation of Y");
    }
    if (ok) {
      res.ok = true;
      res.dec = std::move(dec);
      return res;
    }
    last = std::move(dec);
  }
  res.dec = std::move(last);
  res.failure = "attainment: " + last_issue +
                (opt.epsilon > 0.0 ? " (epsilon budget exhausted)" : " (no epsilon budget)");
  return res;
}

DecompositionReport verify_decomposition(const Decomposition& dec, const Signomial& f,
                                         const MomentRegion& Y, const ConvexRegion* X, int n_samples) {
  DecompositionReport rep;
  auto fail = [&](std::string msg) {
    rep.pass = false;
    rep.issues.push_back(std::move(msg));
  };

  SupportPartition fp;
  try {
    fp = partition_support(f, dec.A);
  } catch (const Error& e) {
    fail(std::string("f does not fit the decomposition's A: ") + e.what());
    rep.structure_ok = false;
    return rep;
  }

  // Structure: each beta of f appears in exactly one part with its own d.
  std::vector<int> used(fp.negative.size(), 0);
  for (const auto& p : dec.parts) {
    if (p.c.size() != static_cast<Eigen::Index>(dec.A.size())) {
      rep.structure_ok = false;
      fail("part for beta " + format_vector(p.beta) + " has the wrong number of coefficients");
      continue;
    }
    bool matched = false;
    for (std::size_t j = 0; j < fp.negative.size(); ++j) {
      if (same_exponent(fp.negative[j], p.beta, 1e-9)) {
        ++used[j];
        matched = true;
        const double dj = fp.d[static_cast<Eigen::Index>(j)];
        if (std::abs(dj - p.d) > 1e-12 * (1.0 + std::abs(dj))) {
          rep.structure_ok = false;
          fail("part for beta " + format_vector(p.beta) + " carries d = " + std::to_string(p.d) +
               " but f has " + std::to_string(dj));
        }
      }
    }
    if (!matched) {
      rep.structure_ok = false;
      fail("part beta " + format_vector(p.beta) + " is not a negative exponent of f");
    }
  }
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (used[j] != 1) {
      rep.structure_ok = false;
      fail("beta " + format_vector(fp.negative[j]) + " appears in " + std::to_string(used[j]) + " parts");
    }
  }

  // Re-summation at the coefficient level.
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(dec.A.size()));
  for (const auto& p : dec.parts) {
    if (p.c.size() == sum.size()) sum += p.c;
  }
  Vector target = fp.c;
  target[static_cast<Eigen::Index>(dec.anchor)] += dec.epsilon_used;
  if (!dec.parts.empty()) {
    rep.resummation_error = (sum - target).cwiseAbs().maxCoeff();
    if (rep.resummation_error > 1e-9 * (1.0 + target.cwiseAbs().maxCoeff())) {
      fail("coefficients re-sum to f + epsilon only within " + std::to_string(rep.resummation_error));
    }
  }
  if (!rep.structure_ok) return rep;

  // Nonnegativity of each part, in moment space and on samples.
  std::vector<Vector> pts;
  if (X) {
    pts = spot_points(*X, n_samples);
  } else if (Y.preimages.cols() > 0) {
    for (Eigen::Index k = 0; k < Y.preimages.cols(); ++k) pts.push_back(Y.preimages.col(k));
  }
  std::vector<Vector> vpts;
  if (!X && Y.kind == MomentKind::VertexPolytope) {
    std::vector<Vector> verts;
    for (Eigen::Index k = 0; k < Y.atoms.cols(); ++k) verts.push_back(Y.atoms.col(k));
    for (int depth = 1; depth <= 60; ++depth) {
      vpts = sample_region(VertexPolytope{verts, {}}, depth);
      if (static_cast<int>(vpts.size()) >= n_samples) break;
    }
  }
  for (const auto& p : dec.parts) {
    Barycentric bc;
    try {
      bc = barycentric(dec.A, p.beta);
    } catch (const Error& e) {
      fail(e.what());
      continue;
    }
    const auto obj = part_objective(p, bc.lambda, dec.anchor, dec.A.size());
    MomentOptions mo;
    const double m = minimize_moment(obj, Y, mo).value;
    rep.worst_moment_min = std::min(rep.worst_moment_min, m);
    const Signomial s = p.signomial(dec.A);
    for (const auto& x : pts) rep.worst_sampled_min = std::min(rep.worst_sampled_min, s(x));
    for (const auto& v : vpts) rep.worst_sampled_min = std::min(rep.worst_sampled_min, obj.value(v));
  }
  if (rep.worst_moment_min < -kCertTol) {
    fail("a part has moment minimum " + std::to_string(rep.worst_moment_min));
  }
  if (rep.worst_sampled_min < -1e-6) {
    fail("a part takes the value " + std::to_string(rep.worst_sampled_min) + " on a sample point");
  }
  return rep;
}

}  // namespace sagesimplex
