#include "sagesimplex/solver.hpp"

#include <algorithm>
#include <cmath>

namespace sagesimplex {

namespace {

double finite_or_inf(double v) { return std::isnan(v) ? kInf : v; }

// D(nu, e c) with 0 ln 0 = 0; +inf when nu_a > 0 but c_a = 0.
double entropy_term(const Vector& nu, const Vector& c) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu[i] <= 0.0) continue;
    if (c[i] <= 0.0) return kInf;
    s += nu[i] * (std::log(nu[i] / c[i]) - 1.0);
  }
  return s;
}

// Exact line search of t -> F(v + t d) on [0, tmax] by bisection on the
// directional derivative.
double line_search(const SmoothFunction& F, const Vector& v, const Vector& d, double tmax) {
  auto slope = [&](double t) { return F.gradient(v + t * d).dot(d); };
  if (!(slope(tmax) > 0.0)) return tmax;
  double lo = 0.0, hi = tmax;
  for (int k = 0; k < 80 && hi - lo > 1e-16 * tmax; ++k) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SolveReport newton_orthant(const MomentObjective& obj, const MomentOptions& opt) {
  const auto m = static_cast<Eigen::Index>(obj.coords.size());
  SolveReport rep;
  Vector v = Vector::Ones(m);
  double fv = obj.value(v);
  auto kkt = [&](const Vector& g) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) r = std::max({r, std::abs(v[i] * g[i]), -g[i]});
    return r;
  };
  for (int it = 0; it < std::min(opt.max_iter, 2000); ++it) {
    rep.iterations = it + 1;
    const Vector g = obj.gradient(v);
    rep.gap = kkt(g);
    if (rep.gap <= opt.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    Matrix H = obj.hessian(v);
    // Scale to the diagonal metric v_i^2, which makes boundary approach cheap.
    const Vector D = v;
    Matrix Hs = D.asDiagonal() * H * D.asDiagonal();
    const Vector gs = D.cwiseProduct(g);
    double mu = 1e-10 * (1.0 + Hs.diagonal().cwiseAbs().maxCoeff());
    Vector step;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::LDLT<Matrix> ldlt(Hs + mu * Matrix::Identity(m, m));
      step = ldlt.solve(-gs);
      if (ldlt.info() == Eigen::Success && step.allFinite() && step.dot(gs) < 0.0) break;
      mu *= 10.0;
    }
    Vector dir = D.cwiseProduct(step);
    double tmax = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (dir[i] < 0.0) tmax = std::min(tmax, 0.99 * v[i] / -dir[i]);
    }
    const double slope = g.dot(dir);
    double t = tmax;
    double fn = finite_or_inf(obj.value(v + t * dir));
    while (fn > fv + 1e-4 * t * slope && t > 1e-16) {
      t *= 0.5;
      fn = finite_or_inf(obj.value(v + t * dir));
    }
    if (!(fn <= fv)) {
      rep.status = SolveStatus::BudgetExhausted;
      break;
    }
    const double prev = fv;
    v += t * dir;
    fv = fn;
    rep.trace.push_back(fv);
    if (fv < -1e15 || v.maxCoeff() > 1e15) {
      rep.status = SolveStatus::Diverged;
      break;
    }
    if (std::abs(prev - fv) <= 1e-16 * (1.0 + std::abs(fv)) && t < 1e-12) break;
  }
  rep.minimizer = v;
  rep.value = fv;
  return rep;
}

// Projected gradient for min h(V mu + R t), mu in the simplex, t >= 0.
SolveReport minimize_over_rays(const SmoothFunction& h, const VertexPolytope& P, int max_iter) {
  const auto n = P.vertices.front().size();
  const auto nv = static_cast<Eigen::Index>(P.vertices.size());
  const auto nr = static_cast<Eigen::Index>(P.rays.size());
  Matrix V(n, nv), R(n, nr);
  for (Eigen::Index j = 0; j < nv; ++j) V.col(j) = P.vertices[j];
  for (Eigen::Index j = 0; j < nr; ++j) R.col(j) = P.rays[j];
  Vector mu = Vector::Constant(nv, 1.0 / nv);
  Vector t = Vector::Zero(nr);
  auto point = [&](const Vector& a, const Vector& b) -> Vector { return V * a + R * b; };
  SolveReport rep;
  double fx = finite_or_inf(h.value(point(mu, t)));
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    rep.iterations = it + 1;
    const Vector g = h.gradient(point(mu, t));
    const Vector gm = V.transpose() * g;
    const Vector gt = R.transpose() * g;
    bool moved = false;
    for (int k = 0; k < 60; ++k) {
      const Vector mu2 = project_simplex(mu - step * gm);
      const Vector t2 = (t - step * gt).cwiseMax(0.0);
      const double f2 = finite_or_inf(h.value(point(mu2, t2)));
      const double decrease = gm.dot(mu - mu2) + gt.dot(t - t2);
      if (f2 <= fx - 0.5 * decrease + 1e-300 && decrease >= 0.0) {
        moved = decrease > 1e-18 * (1.0 + std::abs(fx));
        mu = mu2;
        t = t2;
        fx = f2;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    rep.trace.push_back(fx);
    if (!moved) {
      rep.status = SolveStatus::Converged;
      break;
    }
  }
  if (h.hessian) {
    // Newton steps on the face spanned by the active vertices and rays; first-order
    // progress along a lineality direction is too slow to balance the gradient there.
    for (int it = 0; it < 50; ++it) {
      const Vector x = point(mu, t);
      const Vector g = h.gradient(x);
      std::vector<Eigen::Index> sv, sr;
      for (Eigen::Index j = 0; j < nv; ++j) {
        if (mu[j] > 1e-12) sv.push_back(j);
      }
      for (Eigen::Index j = 0; j < nr; ++j) {
        if (t[j] > 1e-12 || R.col(j).dot(g) < 0.0) sr.push_back(j);
      }
      const auto a = static_cast<Eigen::Index>(sv.size()), b = static_cast<Eigen::Index>(sr.size());
      Matrix M(n, a + b);
      for (Eigen::Index j = 0; j < a; ++j) M.col(j) = V.col(sv[static_cast<std::size_t>(j)]);
      for (Eigen::Index j = 0; j < b; ++j) M.col(a + j) = R.col(sr[static_cast<std::size_t>(j)]);
      Matrix K = Matrix::Zero(a + b + 1, a + b + 1);
      K.topLeftCorner(a + b, a + b) = M.transpose() * h.hessian(x) * M;
      K.block(a + b, 0, 1, a).setOnes();
      K.block(0, a + b, a, 1).setOnes();
      Vector rhs = Vector::Zero(a + b + 1);
      rhs.head(a + b) = -(M.transpose() * g);
      const Vector dz = K.completeOrthogonalDecomposition().solve(rhs).head(a + b);
      double smax = 1.0;
      for (Eigen::Index j = 0; j < a; ++j) {
        const double dj = dz[j], cur = mu[sv[static_cast<std::size_t>(j)]];
        if (dj < 0.0) smax = std::min(smax, -cur / dj);
      }
      for (Eigen::Index j = 0; j < b; ++j) {
        const double dj = dz[a + j], cur = t[sr[static_cast<std::size_t>(j)]];
        if (dj < 0.0) smax = std::min(smax, -cur / dj);
      }
      bool moved = false;
      for (double s = smax; s > 1e-12; s *= 0.5) {
        Vector mu2 = mu, t2 = t;
        for (Eigen::Index j = 0; j < a; ++j) mu2[sv[static_cast<std::size_t>(j)]] += s * dz[j];
        for (Eigen::Index j = 0; j < b; ++j) t2[sr[static_cast<std::size_t>(j)]] += s * dz[a + j];
        mu2 = mu2.cwiseMax(0.0);
        mu2 /= mu2.sum();
        t2 = t2.cwiseMax(0.0);
        const double f2 = finite_or_inf(h.value(point(mu2, t2)));
        if (f2 <= fx) {
          moved = f2 < fx || s * dz.norm() > 1e-15;
          mu = mu2;
          t = t2;
          fx = f2;
          break;
        }
      }
      if (!moved || dz.norm() < 1e-14) break;
    }
  }
  rep.minimizer = point(mu, t);
  rep.value = fx;
  rep.gap = 0.0;
  return rep;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::BudgetExhausted:
      return "budget_exhausted";
    case SolveStatus::Diverged:
      return "diverged";
  }
  return "?";
}

bool powercone_contains(const PowerConePoint& p, double tol) {
  if (p.x.size() != p.lambda.size()) throw InputError("powercone: x and lambda lengths differ");
  if ((p.x.array() < 0.0).any()) return false;
  if (p.z == 0.0) return true;
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < p.x.size(); ++i) {
    if (p.lambda[i] <= 0.0) continue;
    if (p.x[i] == 0.0) return std::abs(p.z) <= tol;
    lhs += p.lambda[i] * std::log(p.x[i]);
  }
  return lhs >= std::log(std::abs(p.z)) - tol;
}

Vector project_simplex(const Vector& y) {
  Vector u = y;
  std::sort(u.data(), u.data() + u.size(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

SolveReport minimize_fw(const SmoothFunction& F, const Matrix& atoms, const FwOptions& opt) {
  const Eigen::Index K = atoms.cols();
  if (K == 0) throw InputError("Frank-Wolfe needs at least one atom");
  Vector vals(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    vals[k] = F.value(atoms.col(k));
    if (!std::isfinite(vals[k])) {
      throw InputError("objective is not finite at atom " + std::to_string(k) + " " +
                       format_vector(atoms.col(k)));
    }
  }
  Eigen::Index i0 = 0;
  vals.minCoeff(&i0);
  Vector w = Vector::Zero(K);
  w[i0] = 1.0;
  Vector v = atoms.col(i0);
  double fv = vals[i0];
  const bool away = static_cast<std::size_t>(K) <= opt.away_atom_limit;

  SolveReport rep;
  rep.trace.push_back(fv);
  for (int it = 0; it < opt.max_iter; ++it) {
    rep.iterations = it;
    const Vector g = F.gradient(v);
    const Vector scores = atoms.transpose() * g;
    Eigen::Index s = 0;
    scores.minCoeff(&s);
    const double gv = g.dot(v);
    rep.gap = gv - scores[s];
    if (rep.gap <= opt.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    Eigen::Index a = -1;
    double away_gap = -kInf;
    if (away) {
      for (Eigen::Index k = 0; k < K; ++k) {
        if (w[k] > 0.0 && scores[k] - gv > away_gap) {
          away_gap = scores[k] - gv;
          a = k;
        }
      }
    }
    const bool fw_step = a < 0 || rep.gap >= away_gap || w[a] >= 1.0;
    Vector d;
    double tmax;
    if (fw_step) {
      d = atoms.col(s) - v;
      tmax = 1.0;
    } else {
      d = v - atoms.col(a);
      tmax = w[a] / (1.0 - w[a]);
    }
    double t = line_search(F, v, d, tmax);
    double fn = F.value(v + t * d);
    while (!(fn <= fv) && t > 1e-20) {
      t *= 0.5;
      fn = F.value(v + t * d);
    }
    if (!(fn <= fv)) {
      rep.status = SolveStatus::BudgetExhausted;
      break;
    }
    if (fw_step) {
      w *= (1.0 - t);
      w[s] += t;
    } else {
      w *= (1.0 + t);
      w[a] = t >= tmax ? 0.0 : w[a] - t;
    }
    v += t * d;
    fv = fn;
    rep.trace.push_back(fv);
    rep.iterations = it + 1;
  }
  rep.minimizer = v;
  rep.value = fv;
  return rep;
}

SolveReport minimize_fw(const SmoothFunction& F, const MomentRegion& Y, const FwOptions& opt) {
  if (Y.kind == MomentKind::PositiveOrthantImage) {
    throw UnsupportedRegionError("Frank-Wolfe needs a region given by atoms");
  }
  return minimize_fw(F, Y.atoms, opt);
}

SolveReport minimize_1d(const std::function<double(double)>& F, const Interval1D& X,
                        const Options1D& opt, const std::function<double(double)>& dF) {
  auto f = [&](double x) { return finite_or_inf(F(x)); };
  SolveReport rep;
  auto finish = [&](double x, SolveStatus st) {
    rep.minimizer = Vector::Constant(1, x);
    rep.value = f(x);
    rep.status = st;
    return rep;
  };
  if (X.lower > X.upper) throw InputError("minimize_1d: empty interval");
  if (X.lower == X.upper) {
    rep.gap = 0.0;
    return finish(X.lower, SolveStatus::Converged);
  }

  double lo = X.lower, hi = X.upper;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    // Walk downhill with doubling steps until the function turns up.
    double start = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    int dir = std::isfinite(lo) ? 1 : (std::isfinite(hi) ? -1 : 0);
    if (dir == 0) {
      const double f0 = f(0.0);
      if (f(1.0) < f0) {
        dir = 1;
      } else if (f(-1.0) < f0) {
        dir = -1;
      } else {
        lo = -1.0;
        hi = 1.0;
      }
    }
    if (dir != 0) {
      double prev = start, cur = start + dir, fcur = f(cur);
      double fprev = f(prev);
      if (fcur >= fprev) {
        lo = std::min(prev, cur);
        hi = std::max(prev, cur);
      } else {
        bool bracketed = false;
        for (int e = 0; e < opt.max_expansions; ++e) {
          const double next = cur + 2.0 * (cur - prev);
          const double fnext = f(next);
          if (fnext >= fcur) {
            lo = std::min(prev, next);
            hi = std::max(prev, next);
            bracketed = true;
            break;
          }
          prev = cur;
          cur = next;
          fcur = fnext;
        }
        if (!bracketed) {
          rep.iterations = opt.max_expansions;
          return finish(cur, SolveStatus::BudgetExhausted);
        }
      }
    }
  }

  int it = 0;
  if (dF) {
    if (dF(lo) >= 0.0) {
      rep.gap = 0.0;
      return finish(lo, SolveStatus::Converged);
    }
    if (dF(hi) <= 0.0) {
      rep.gap = 0.0;
      return finish(hi, SolveStatus::Converged);
    }
    while (hi - lo > opt.tol * (1.0 + std::abs(lo)) && it < opt.max_iter) {
      const double mid = 0.5 * (lo + hi);
      (dF(mid) > 0.0 ? hi : lo) = mid;
      rep.trace.push_back(f(mid));
      ++it;
    }
  } else {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    double fa = f(a), fb = f(b);
    while (hi - lo > opt.tol * (1.0 + std::abs(lo)) && it < opt.max_iter) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - r * (hi - lo);
        fa = f(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + r * (hi - lo);
        fb = f(b);
      }
      rep.trace.push_back(std::min(fa, fb));
      ++it;
    }
  }
  rep.iterations = it;
  rep.gap = hi - lo;
  // Endpoints are candidates too: golden section never evaluates them.
  double best = 0.5 * (lo + hi);
  for (double cand : {lo, hi}) {
    if (f(cand) < f(best)) best = cand;
  }
  return finish(best, rep.gap <= opt.tol * (1.0 + std::abs(lo)) ? SolveStatus::Converged
                                                                 : SolveStatus::BudgetExhausted);
}

double entropy_sigma_objective(const Vector& c, const Vector& beta, const std::vector<Vector>& A,
                               const ConvexRegion& X, const Vector& nu) {
  Vector y = Vector::Zero(beta.size());
  for (std::size_t i = 0; i < A.size(); ++i) y += nu[static_cast<Eigen::Index>(i)] * (beta - A[i]);
  const double sigma = support_function(X, y);
  if (!std::isfinite(sigma)) return kInf;
  return sigma + entropy_term(nu, c);
}

SolveReport minimize_entropy_sigma(const Vector& c, const Vector& beta, const std::vector<Vector>& A,
                                   const ConvexRegion& X, double tol) {
  return solve_entropy_sigma(c, beta, A, X, tol).report;
}

EntropySolve solve_entropy_sigma(const Vector& c, const Vector& beta, const std::vector<Vector>& A,
                                 const ConvexRegion& X, double tol) {
  const auto m = static_cast<Eigen::Index>(A.size());
  if (c.size() != m) throw InputError("minimize_entropy_sigma: c and A sizes differ");
  if ((c.array() < 0.0).any()) throw InputError("minimize_entropy_sigma: c must be nonnegative");
  validate_region(X);
  if (beta.size() != region_dimension(X)) throw InputError("minimize_entropy_sigma: dimension mismatch");

  EntropySolve out;
  SolveReport& rep = out.report;
  rep.minimizer = Vector::Zero(m);
  rep.value = 0.0;
  rep.gap = 0.0;
  rep.status = SolveStatus::Converged;
  out.cut = Vector::Zero(m);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (c[i] > 0.0) active.push_back(i);
  }

  if (std::holds_alternative<FullSpace>(X)) {
    if (!affinely_independent(A)) {
      throw StructureError("the full-space entropy path needs an affinely independent A");
    }
    Barycentric bc;
    try {
      bc = barycentric(A, beta);
    } catch (const StructureError&) {
      return out;  // balance impossible: nu = 0 is optimal
    }
    if (!bc.in_hull) return out;
    // Cut weights lambda_a Theta / c_a, from a positive perturbation where c
    // vanishes on the support of lambda.
    Vector cp = c;
    const double floor = 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff());
    double log_theta = 0.0, log_theta_p = 0.0;
    bool degenerate = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (bc.lambda[i] <= 0.0) continue;
      if (c[i] <= 0.0) {
        degenerate = true;
        cp[i] = floor;
      } else {
        log_theta += bc.lambda[i] * std::log(c[i] / bc.lambda[i]);
      }
      log_theta_p += bc.lambda[i] * std::log(cp[i] / bc.lambda[i]);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (bc.lambda[i] > 0.0) out.cut[i] = bc.lambda[i] * std::exp(log_theta_p) / cp[i];
    }
    if (degenerate || active.empty()) return out;
    rep.minimizer = std::exp(log_theta) * bc.lambda;
    rep.value = entropy_sigma_objective(c, beta, A, X, rep.minimizer);
    return out;
  }

  // Dual problem: h(x) = sum c_a exp<a - beta, x>.
  SmoothFunction h;
  h.value = [&](const Vector& x) {
    double s = 0.0;
    for (auto i : active) s += c[i] * std::exp((A[i] - beta).dot(x));
    return s;
  };
  h.gradient = [&](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (auto i : active) g += c[i] * std::exp((A[i] - beta).dot(x)) * (A[i] - beta);
    return g;
  };
  h.hessian = [&](const Vector& x) {
    Matrix H = Matrix::Zero(x.size(), x.size());
    for (auto i : active) {
      const Vector u = A[i] - beta;
      H += c[i] * std::exp(u.dot(x)) * u * u.transpose();
    }
    return H;
  };
  auto weights = [&](const Vector& x) {
    Vector u(m);
    for (Eigen::Index i = 0; i < m; ++i) u[i] = std::exp((A[i] - beta).dot(x));
    return u;
  };

  if (active.empty()) {
    Vector x0;
    if (const auto* iv = std::get_if<Interval1D>(&X)) {
      x0 = Vector::Constant(1, std::isfinite(iv->lower) ? iv->lower
                                                         : (std::isfinite(iv->upper) ? iv->upper : 0.0));
    } else {
      x0 = std::get<VertexPolytope>(X).vertices.front();
    }
    out.cut = weights(x0);
    return out;
  }

  SolveReport inner;
  if (const auto* iv = std::get_if<Interval1D>(&X)) {
    Options1D o;
    o.tol = 1e-12;
    inner = minimize_1d([&](double t) { return h.value(Vector::Constant(1, t)); }, *iv, o,
                        [&](double t) { return h.gradient(Vector::Constant(1, t))[0]; });
  } else {
    const auto& P = std::get<VertexPolytope>(X);
    if (P.rays.empty()) {
      Matrix V(beta.size(), static_cast<Eigen::Index>(P.vertices.size()));
      for (std::size_t j = 0; j < P.vertices.size(); ++j) V.col(static_cast<Eigen::Index>(j)) = P.vertices[j];
      FwOptions o;
      o.tol = tol;
      o.max_iter = 20000;
      inner = minimize_fw(h, V, o);
    } else {
      inner = minimize_over_rays(h, P, 20000);
    }
  }

  const Vector& x = inner.minimizer;
  out.cut = weights(x);
  Vector nu = Vector::Zero(m);
  for (auto i : active) nu[i] = c[i] * out.cut[i];
  const double hx = h.value(x);
  const double g_nu = entropy_sigma_objective(c, beta, A, X, nu);
  rep.iterations = inner.iterations;
  rep.trace = inner.trace;
  if (g_nu <= 0.0) {
    rep.minimizer = nu;
    rep.value = g_nu;
  }
  rep.gap = std::max(0.0, rep.value + hx);
  rep.status = rep.gap <= tol * (1.0 + hx) ? SolveStatus::Converged : SolveStatus::BudgetExhausted;
  return out;
}

double MomentObjective::monomial(std::size_t j, const Vector& v) const {
  double s = 0.0;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const double l = lambda[j][static_cast<Eigen::Index>(coords[k])];
    if (l != 0.0) s += l * std::log(v[static_cast<Eigen::Index>(k)]);
  }
  return std::exp(s);
}

Vector MomentObjective::monomial_gradient(std::size_t j, const Vector& v) const {
  const double z = monomial(j, v);
  Vector g = Vector::Zero(v.size());
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const double l = lambda[j][static_cast<Eigen::Index>(coords[k])];
    if (l != 0.0) g[static_cast<Eigen::Index>(k)] = l * z / v[static_cast<Eigen::Index>(k)];
  }
  return g;
}

double MomentObjective::value(const Vector& v) const {
  double s = c[static_cast<Eigen::Index>(anchor)];
  for (std::size_t k = 0; k < coords.size(); ++k) {
    s += c[static_cast<Eigen::Index>(coords[k])] * v[static_cast<Eigen::Index>(k)];
  }
  for (std::size_t j = 0; j < d.size(); ++j) s += d[j] * monomial(j, v);
  return s;
}

Vector MomentObjective::gradient(const Vector& v) const {
  Vector g(v.size());
  for (std::size_t k = 0; k < coords.size(); ++k) {
    g[static_cast<Eigen::Index>(k)] = c[static_cast<Eigen::Index>(coords[k])];
  }
  for (std::size_t j = 0; j < d.size(); ++j) g += d[j] * monomial_gradient(j, v);
  return g;
}

Matrix MomentObjective::hessian(const Vector& v) const {
  const auto m = v.size();
  Matrix H = Matrix::Zero(m, m);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double z = monomial(j, v);
    Vector l(m);
    for (Eigen::Index k = 0; k < m; ++k) l[k] = lambda[j][static_cast<Eigen::Index>(coords[k])] / v[k];
    Matrix Hj = z * (l * l.transpose());
    for (Eigen::Index k = 0; k < m; ++k) {
      Hj(k, k) -= z * lambda[j][static_cast<Eigen::Index>(coords[k])] / (v[k] * v[k]);
    }
    H += d[j] * Hj;
  }
  return H;
}

SmoothFunction MomentObjective::as_function() const {
  return {[this](const Vector& v) { return value(v); },
          [this](const Vector& v) { return gradient(v); },
          [this](const Vector& v) { return hessian(v); }};
}

MomentObjective moment_objective(const SupportPartition& part, std::size_t anchor) {
  MomentObjective obj;
  obj.c = part.c;
  obj.anchor = anchor;
  obj.coords = moment_indices(part.positive.size(), anchor);
  for (std::size_t j = 0; j < part.negative.size(); ++j) {
    obj.d.push_back(part.d[static_cast<Eigen::Index>(j)]);
    obj.lambda.push_back(part.barycentric.at(j).lambda);
  }
  return obj;
}

SolveReport minimize_moment(const MomentObjective& obj, const MomentRegion& Y,
                            const MomentOptions& opt) {
  if (Y.kind != MomentKind::PositiveOrthantImage) {
    FwOptions o;
    o.tol = opt.tol;
    o.max_iter = opt.max_iter;
    return minimize_fw(obj.as_function(), Y, o);
  }
  if (!obj.d.empty()) return newton_orthant(obj, opt);
  // Linear objective on the open orthant: infimum c_anchor unless some c < 0.
  SolveReport rep;
  rep.minimizer = Vector::Zero(static_cast<Eigen::Index>(obj.coords.size()));
  rep.value = obj.c[static_cast<Eigen::Index>(obj.anchor)];
  rep.gap = 0.0;
  rep.status = SolveStatus::Converged;
  for (auto k : obj.coords) {
    if (obj.c[static_cast<Eigen::Index>(k)] < 0.0) {
      rep.value = -kInf;
      rep.status = SolveStatus::Diverged;
    }
  }
  return rep;
}

MomentReport moment_program(const Signomial& f, const SupportPartition& part, const MomentRegion& Y,
                            const MomentOptions& opt) {
  const auto diag = validate_simplex_problem(part);
  if (!diag.eligible) {
    std::string why;
    for (const auto& r : diag.reasons) why += (why.empty() ? "" : "; ") + r;
    throw StructureError("instance is not eligible for the moment program (" + why +
                         "); use the global or AGE certificate paths");
  }
  if (Y.A.size() != part.positive.size()) throw InputError("moment region was built for a different A");
  for (std::size_t i = 0; i < Y.A.size(); ++i) {
    if (!same_exponent(Y.A[i], part.positive[i])) {
      throw InputError("moment region was built for a different A");
    }
  }
  const auto obj = moment_objective(part, Y.anchor);
  MomentReport out;
  out.solve = minimize_moment(obj, Y, opt);
  out.attained = out.solve.status == SolveStatus::Converged &&
                 (Y.kind != MomentKind::PositiveOrthantImage ||
                  (out.solve.minimizer.size() > 0 && out.solve.minimizer.minCoeff() > 1e-12));
  out.v = out.solve.minimizer;
  out.z.resize(static_cast<Eigen::Index>(obj.d.size()));
  for (std::size_t j = 0; j < obj.d.size(); ++j) out.z[static_cast<Eigen::Index>(j)] = obj.monomial(j, out.v);
  out.f_value = std::numeric_limits<double>::quiet_NaN();
  if (out.v.size() > 0 && (out.v.array() > 0.0).all()) {
    try {
      out.x = recover_point(Y.A, Y.anchor, out.v);
      out.f_value = f(out.x);
    } catch (const Error&) {
      out.x.resize(0);
    }
  }
  return out;
}

}  // namespace sagesimplex
