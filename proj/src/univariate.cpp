#include "sagesimplex/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sagesimplex/solver.hpp"

namespace sagesimplex {

namespace {

void require_univariate(const Signomial& f, const char* who) {
  if (f.dimension() != 1) throw InputError(std::string(who) + ": signomial must be univariate");
}

std::vector<Term> sorted_terms(const Signomial& f) {
  auto terms = f.terms();
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent[0] < b.exponent[0]; });
  return terms;
}

Vector scalar(double v) { return Vector::Constant(1, v); }

// Global minimum of a one-dimensional function on X: dense grid, then a local
// refinement around the best grid point. Unbounded sides are truncated once F
// grows past its value at the finite end.
SolveReport global_min_1d(const std::function<double(double)>& F, const std::function<double(double)>& dF,
                          const Interval1D& X) {
  double lo = X.lower, hi = X.upper;
  const double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
  const double ref = F(anchor);
  auto push = [&](double from, double dir) {
    double step = 1.0;
    for (int i = 0; i < 60; ++i, step *= 2.0) {
      const double t = from + dir * step;
      if (F(t) > std::abs(ref) + 1.0 && dir * dF(t) > 0.0) return t;
    }
    return from + dir * step;
  };
  if (!std::isfinite(hi)) hi = push(anchor, 1.0);
  if (!std::isfinite(lo)) lo = push(anchor, -1.0);
  constexpr int kGrid = 4000;
  int best = 0;
  double best_val = kInf;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = F(lo + (hi - lo) * i / kGrid);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  Interval1D local{lo + (hi - lo) * std::max(best - 1, 0) / kGrid, lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid};
  Options1D o;
  o.tol = 1e-14;
  SolveReport r = minimize_1d(F, local, o, dF);
  if (best_val < r.value) {
    r.value = best_val;
    r.minimizer = scalar(lo + (hi - lo) * best / kGrid);
  }
  return r;
}

}  // namespace

int sign_changes(const std::vector<double>& coefficients) {
  int changes = 0;
  int last = 0;
  for (double c : coefficients) {
    if (std::abs(c) < kZeroCoefficient) continue;
    const int s = c > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int sign_changes(const Signomial& f) {
  require_univariate(f, "sign_changes");
  std::vector<double> c;
  for (const auto& t : sorted_terms(f)) c.push_back(t.coefficient);
  return sign_changes(c);
}

bool count_roots_bound_check(const Signomial& f, const std::vector<RootEstimate>& roots) {
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  return total <= sign_changes(f);
}

std::optional<SeparationWitness> separates(const std::vector<double>& A, const std::vector<double>& B) {
  std::vector<double> a = A;
  std::sort(a.begin(), a.end());
  for (double alpha : a) {
    double below = -kInf, above = kInf;
    for (double b : B) {
      if (b < alpha) below = std::max(below, b);
      if (b > alpha) above = std::min(above, b);
    }
    if (std::isfinite(below) && std::isfinite(above)) return SeparationWitness{below, alpha, above};
  }
  return std::nullopt;
}

void validate_instance(const UnivariateInstance& inst) {
  if (!(inst.alpha1 < inst.alpha2)) throw InputError("univariate instance needs alpha1 < alpha2");
  for (std::size_t i = 0; i < inst.B.size(); ++i) {
    const double b = inst.B[i];
    if (!std::isfinite(b)) throw InputError("univariate instance: non-finite beta");
    if (i > 0 && !(inst.B[i - 1] < b)) throw InputError("univariate instance: B must be strictly increasing");
    if (b == inst.alpha1 || b == inst.alpha2) throw InputError("univariate instance: B meets A");
  }
  validate_region(inst.X);
}

CoincidenceVerdict cone_coincidence(const UnivariateInstance& inst) {
  validate_instance(inst);
  CoincidenceVerdict v;
  v.cones = recession_dual_1d(inst.X);
  if (inst.X.lower == inst.X.upper) {
    v.admissible = Interval1D{-kInf, kInf};
    v.reason = "X is a single point";
    return v;
  }
  switch (v.cones.dual) {
    case Cone1D::Zero: v.admissible = {inst.alpha1, inst.alpha2}; break;
    case Cone1D::NonNegative: v.admissible = {-kInf, inst.alpha2}; break;
    case Cone1D::NonPositive: v.admissible = {inst.alpha1, kInf}; break;
    case Cone1D::Line: v.admissible = {-kInf, kInf}; break;
  }
  for (double b : inst.B) {
    if (b < v.admissible.lower || b > v.admissible.upper) v.outside.push_back(b);
  }
  v.witness = separates({inst.alpha1, inst.alpha2}, inst.B);
  if (!v.outside.empty()) {
    v.coincide = false;
    v.reason = "some beta lies outside conv(A) - rec(X)*";
  } else if (v.witness) {
    v.coincide = false;
    v.reason = "A separates B";
  } else {
    v.reason = "every beta is admissible and A does not separate B";
  }
  return v;
}

ProportionalSplit proportional_split_1d(const Signomial& f, const Interval1D& X) {
  require_univariate(f, "proportional_split_1d");
  validate_region(X);
  if (!std::isfinite(X.lower)) throw InputError("proportional_split_1d: inf X must be finite");
  const SupportPartition part = partition_support(f);
  if (part.positive.size() != 2) {
    throw StructureError("proportional_split_1d: f needs exactly two positive terms");
  }
  ProportionalSplit out;
  const double a = X.lower;
  out.f_at_a = f(scalar(a));
  if (out.f_at_a < -kCertTol) {
    out.failure = "f(inf X) is negative, so f is not nonnegative on X";
    return out;
  }
  const SolveReport mr = global_min_1d([&](double t) { return f(scalar(t)); },
                                       [&](double t) { return f.gradient(scalar(t))[0]; }, X);
  if (mr.value < out.f_at_a - kCertTol) {
    out.failure = "f is not minimized at inf X; use the general decompose path";
    return out;
  }

  const std::size_t k = part.negative.size();
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    out.weights.push_back(-part.d[static_cast<Eigen::Index>(j)] * std::exp(part.negative[j][0] * a));
    total += out.weights.back();
  }
  out.dec.dimension = 1;
  out.dec.A = part.positive;
  out.dec.anchor = default_anchor(part.positive);
  if (k == 0) {
    out.failure = "f has no negative terms to split over";
    return out;
  }
  Vector used = Vector::Zero(2);
  for (std::size_t j = 0; j < k; ++j) {
    out.weights[j] /= total;
    CircuitPart p;
    p.beta = part.negative[j];
    p.d = part.d[static_cast<Eigen::Index>(j)];
    // The last share takes the remainder so the parts sum to f exactly.
    p.c = j + 1 < k ? Vector(out.weights[j] * part.c) : Vector(part.c - used);
    used += p.c;
    out.dec.parts.push_back(std::move(p));
  }
  out.ok = true;
  return out;
}

Counterexample counterexample(double alpha1, double alpha2, double beta1, double beta2,
                              const Interval1D& X, double b) {
  if (!(beta1 < alpha1 && alpha1 < beta2 && beta2 < alpha2)) {
    throw InputError("counterexample needs beta1 < alpha1 < beta2 < alpha2");
  }
  validate_region(X);
  const double a = X.lower;
  if (!std::isfinite(a)) throw InputError("counterexample needs inf X finite");
  if (b == a) throw InputError("counterexample needs b different from inf X");
  if (b < X.lower || b > X.upper) throw InputError("counterexample needs b in X");

  // Shift so that alpha1 = 0; multiplying by exp(alpha1 x) restores f.
  const double A2 = alpha2 - alpha1, B1 = beta1 - alpha1, B2 = beta2 - alpha1;
  Counterexample ce;
  ce.c2 = -1.0 / (std::exp(A2 * a) - std::exp(A2 * b));
  ce.d2 = 2.0 / (std::exp(B2 * a) - std::exp(B2 * b));
  ce.d1 = std::min(-(ce.c2 * std::exp(A2 * a) + ce.d2 * std::exp(B2 * a)) / std::exp(B1 * a), 0.0) - 1.0;

  auto tail = [&](double x) { return ce.c2 * std::exp(A2 * x) + ce.d1 * std::exp(B1 * x) + ce.d2 * std::exp(B2 * x); };
  auto dtail = [&](double x) {
    return ce.c2 * A2 * std::exp(A2 * x) + ce.d1 * B1 * std::exp(B1 * x) + ce.d2 * B2 * std::exp(B2 * x);
  };
  const SolveReport r = global_min_1d(tail, dtail, X);
  ce.c1 = -r.value;
  ce.zero = r.minimizer[0];
  ce.f = Signomial(1, {{ce.c1, scalar(alpha1)}, {ce.c2, scalar(alpha2)}, {ce.d1, scalar(beta1)}, {ce.d2, scalar(beta2)}});
  return ce;
}

}  // namespace sagesimplex
