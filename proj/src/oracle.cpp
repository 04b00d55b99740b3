#include "sagesimplex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "sagesimplex/solver.hpp"

namespace sagesimplex {

namespace {

constexpr int kDescentSteps = 50;
constexpr std::size_t kCandidates = 5;
constexpr double kRootTol = 1e-9;
constexpr double kClusterTol = 1e-6;

Vector scalar(double v) { return Vector::Constant(1, v); }

Vector numeric_gradient(const Signomial& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

using Projector = std::function<Vector(const Vector&)>;

// Projected backtracking descent with central differences.
GridCandidate descend(const Signomial& f, GridCandidate start, const Projector& project, double scale) {
  double step = scale;
  for (int it = 0; it < kDescentSteps; ++it) {
    const Vector g = numeric_gradient(f, start.x, 1e-7 * std::max(1.0, start.x.norm()));
    const double gn = g.norm();
    if (!(gn > 0.0) || !std::isfinite(gn)) break;
    bool moved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      const Vector y = project(start.x - (step / gn) * g);
      const double fy = f(y);
      if (fy < start.value) {
        start = {y, fy};
        moved = true;
        step *= 2.0;
        break;
      }
    }
    if (!moved) break;
  }
  return start;
}

// Euclidean projection onto X. Polytopes with rays are not projected; points
// outside them are pulled back to the best vertex.
Projector projector(const ConvexRegion& X) {
  if (std::holds_alternative<FullSpace>(X)) return [](const Vector& x) { return x; };
  if (const auto* iv = std::get_if<Interval1D>(&X)) {
    const Interval1D I = *iv;
    return [I](const Vector& x) { return scalar(std::clamp(x[0], I.lower, I.upper)); };
  }
  const auto& P = std::get<VertexPolytope>(X);
  Matrix V(static_cast<Eigen::Index>(P.vertices.front().size()), static_cast<Eigen::Index>(P.vertices.size()));
  for (std::size_t j = 0; j < P.vertices.size(); ++j) V.col(static_cast<Eigen::Index>(j)) = P.vertices[j];
  if (!P.rays.empty()) {
    return [X, V](const Vector& x) -> Vector {
      if (contains(X, x, 1e-12)) return x;
      Eigen::Index best = 0;
      (V.colwise() - x).colwise().squaredNorm().minCoeff(&best);
      return V.col(best);
    };
  }
  return [V](const Vector& x) -> Vector {
    SmoothFunction d;
    d.value = [&](const Vector& y) { return 0.5 * (y - x).squaredNorm(); };
    d.gradient = [&](const Vector& y) { return Vector(y - x); };
    FwOptions o;
    o.tol = 1e-16;
    o.max_iter = 2000;
    return minimize_fw(d, V, o).minimizer;
  };
}

// Greedy pick of the best points that are pairwise at least `sep` apart.
std::vector<GridCandidate> diverse_best(std::vector<GridCandidate> pts, double sep) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<GridCandidate> out;
  for (auto& p : pts) {
    const bool far = std::all_of(out.begin(), out.end(), [&](const auto& q) { return (q.x - p.x).norm() >= sep; });
    if (far) out.push_back(std::move(p));
    if (out.size() == kCandidates) break;
  }
  return out;
}

GridMinResult scan(const Signomial& f, const std::vector<Vector>& points, const Projector& project,
                   double spacing) {
  GridMinResult res;
  res.points = points.size();
  std::vector<GridCandidate> pts;
  pts.reserve(points.size());
  for (const auto& x : points) pts.push_back({x, f(x)});
  for (auto& c : diverse_best(std::move(pts), 4.0 * spacing)) {
    res.candidates.push_back(descend(f, std::move(c), project, spacing));
  }
  std::sort(res.candidates.begin(), res.candidates.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  if (!res.candidates.empty()) {
    res.value = res.candidates.front().value;
    res.argmin = res.candidates.front().x;
  }
  return res;
}

double diameter(const std::vector<Vector>& V) {
  double d = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    for (std::size_t j = i + 1; j < V.size(); ++j) d = std::max(d, (V[i] - V[j]).norm());
  }
  return d;
}

// Tensor grid on [-w, w]^n with at most about 2e5 points.
std::vector<Vector> box_grid(int n, double w, int resolution) {
  int r = std::max(resolution, 1);
  while (r > 1 && std::pow(r + 1.0, n) > 2e5) --r;
  std::vector<Vector> pts;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = -w + 2.0 * w * idx[static_cast<std::size_t>(i)] / r;
    pts.push_back(std::move(x));
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] > r) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return pts;
}

}  // namespace

GridMinResult grid_min(const Signomial& f, const ConvexRegion& X, int resolution) {
  validate_region(X);
  if (!is_bounded(X)) throw InputError("grid_min needs a bounded region");
  if (region_dimension(X) != f.dimension()) throw InputError("grid_min: dimension mismatch");
  const int res = std::max(resolution, 1);
  if (const auto* iv = std::get_if<Interval1D>(&X)) {
    std::vector<Vector> pts;
    for (int i = 0; i <= res; ++i) pts.push_back(scalar(iv->lower + (iv->upper - iv->lower) * i / res));
    const double spacing = (iv->upper - iv->lower) / res;
    return scan(f, pts, projector(X), spacing);
  }
  const auto& P = std::get<VertexPolytope>(X);
  const auto pts = sample_region(X, res);
  const double spacing = std::max(diameter(P.vertices) / res, 1e-12);
  return scan(f, pts, projector(X), spacing);
}

GridMinResult global_min_estimate(const Signomial& f, double box_halfwidth, int resolution) {
  const int n = f.dimension();
  double w = box_halfwidth;
  GridMinResult best;
  for (int round = 0; round <= 3; ++round, w *= 2.0) {
    const auto pts = box_grid(n, w, resolution);
    const int r = static_cast<int>(std::lround(std::pow(static_cast<double>(pts.size()), 1.0 / n))) - 1;
    const double spacing = 2.0 * w / std::max(r, 1);
    best = scan(f, pts, [w](const Vector& x) -> Vector { return x.cwiseMax(-w).cwiseMin(w); }, spacing);
    best.boundary_limited = best.argmin.size() > 0 && best.argmin.cwiseAbs().maxCoeff() >= w - 0.5 * spacing;
    if (!best.boundary_limited) break;
  }
  return best;
}

std::optional<Vector> falsify(const Signomial& f, const ConvexRegion& X, int budget, std::uint64_t seed,
                              double tol) {
  validate_region(X);
  const int n = region_dimension(X);
  if (n != f.dimension()) throw InputError("falsify: dimension mismatch");
  auto violates = [&](const Vector& x) { return f(x) < -tol; };

  std::vector<Vector> pts = spot_points(X, std::max(budget / 2, 1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int random_count = std::max(budget - static_cast<int>(pts.size()), 0);
  for (int i = 0; i < random_count; ++i) {
    Vector x(n);
    if (std::holds_alternative<FullSpace>(X)) {
      for (int j = 0; j < n; ++j) x[j] = normal(rng);
    } else if (const auto* iv = std::get_if<Interval1D>(&X)) {
      const double lo = std::isfinite(iv->lower) ? iv->lower : (std::isfinite(iv->upper) ? iv->upper - 6.0 : -6.0);
      const double hi = std::isfinite(iv->upper) ? iv->upper : lo + 6.0 + (std::isfinite(iv->lower) ? 0.0 : 6.0);
      x[0] = lo + (hi - lo) * unit(rng);
    } else {
      const auto& P = std::get<VertexPolytope>(X);
      Vector w(static_cast<Eigen::Index>(P.vertices.size()));
      for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = -std::log(std::max(unit(rng), 1e-300));
      w /= w.sum();
      x = Vector::Zero(n);
      for (std::size_t j = 0; j < P.vertices.size(); ++j) x += w[static_cast<Eigen::Index>(j)] * P.vertices[j];
      for (const auto& r : P.rays) x += 3.0 * unit(rng) * r;
    }
    pts.push_back(std::move(x));
  }

  std::vector<GridCandidate> cands;
  cands.reserve(pts.size());
  for (const auto& x : pts) {
    if (violates(x)) return x;
    cands.push_back({x, f(x)});
  }
  for (auto& c : diverse_best(std::move(cands), 0.1)) {
    const GridCandidate d = descend(f, std::move(c), projector(X), 0.5);
    if (violates(d.x)) return d.x;
  }
  return std::nullopt;
}

std::vector<RootEstimate> find_roots_1d(const Signomial& f, const Interval1D& X, int resolution) {
  if (f.dimension() != 1) throw InputError("find_roots_1d: signomial must be univariate");
  if (!std::isfinite(X.lower) || !std::isfinite(X.upper) || X.lower > X.upper) {
    throw InputError("find_roots_1d needs a bounded interval");
  }
  const int res = std::max(resolution, 2);
  auto F = [&](double t) { return f(scalar(t)); };
  auto dF = [&](double t) { return f.gradient(scalar(t))[0]; };
  auto d2F = [&](double t) {
    const double h = 1e-5 * std::max(1.0, std::abs(t));
    return (dF(t + h) - dF(t - h)) / (2.0 * h);
  };
  std::vector<double> xs(static_cast<std::size_t>(res) + 1), fs(xs.size());
  for (int i = 0; i <= res; ++i) {
    xs[static_cast<std::size_t>(i)] = X.lower + (X.upper - X.lower) * i / res;
    fs[static_cast<std::size_t>(i)] = F(xs[static_cast<std::size_t>(i)]);
  }

  std::vector<RootEstimate> roots;
  auto add = [&](double x, int mult) {
    for (auto& r : roots) {
      if (std::abs(r.x - x) < kClusterTol) {
        r.multiplicity = std::max(r.multiplicity, mult);
        return;
      }
    }
    roots.push_back({x, mult});
  };
  // Multiplicity from how many derivatives vanish at the root.
  auto multiplicity = [&](double x, bool even) {
    const double scale = 1.0 + std::abs(F(x)) + std::abs(dF(x));
    if (even) return std::abs(d2F(x)) < 1e-6 * scale ? 4 : 2;
    return std::abs(dF(x)) < 1e-6 * (1.0 + std::abs(d2F(x))) ? 3 : 1;
  };

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      const bool even = i > 0 && (fs[i - 1] < 0.0) == (fs[i + 1] < 0.0);
      add(xs[i], multiplicity(xs[i], even));
      continue;
    }
    if ((fs[i] < 0.0) != (fs[i + 1] < 0.0) && fs[i + 1] != 0.0) {
      double lo = xs[i], hi = xs[i + 1];
      const bool neg_lo = fs[i] < 0.0;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
        const double mid = 0.5 * (lo + hi);
        ((F(mid) < 0.0) == neg_lo ? lo : hi) = mid;
      }
      const double r = 0.5 * (lo + hi);
      if (std::abs(F(r)) <= 1e-6) add(r, multiplicity(r, false));
    }
  }
  if (fs.back() == 0.0) add(xs.back(), multiplicity(xs.back(), false));

  // Interior extrema of |f| that touch zero without a sign change.
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double a = std::abs(fs[i]);
    if (!(a <= std::abs(fs[i - 1]) && a <= std::abs(fs[i + 1]))) continue;
    if ((fs[i - 1] < 0.0) != (fs[i + 1] < 0.0)) continue;
    const double sign = fs[i] >= 0.0 ? 1.0 : -1.0;
    double lo = xs[i - 1], hi = xs[i + 1];
    // Bisection on the derivative of sign*f, which is increasing through the extremum.
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
      const double mid = 0.5 * (lo + hi);
      (sign * dF(mid) < 0.0 ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    if (std::abs(F(r)) < kRootTol) add(r, multiplicity(r, true));
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return roots;
}

}  // namespace sagesimplex
