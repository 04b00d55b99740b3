#include "sagesimplex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "sagesimplex/lp.hpp"

namespace sagesimplex {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kMaxExponent = 700.0;

std::vector<Vector> dedupe(const std::vector<Vector>& pts) {
  std::vector<Vector> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out) dup = dup || same_exponent(p, q, 1e-14);
    if (!dup) out.push_back(p);
  }
  return out;
}

// All vectors of k nonnegative integers summing to depth.
void compositions(int k, int depth, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur(k, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k - 1) {
      cur[i] = left;
      visit(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[i] = a;
      rec(i + 1, left - a);
    }
  };
  if (k > 0) rec(0, depth);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Vector> simplex_grid(const std::vector<Vector>& verts, int depth) {
  if (depth <= 0) return verts;
  std::vector<Vector> out;
  const int k = static_cast<int>(verts.size());
  compositions(k, depth, [&](const std::vector<int>& w) {
    Vector p = Vector::Zero(verts.front().size());
    for (int i = 0; i < k; ++i) {
      if (w[i]) p += (static_cast<double>(w[i]) / depth) * verts[i];
    }
    // Exact vertices where the grid hits them.
    for (int i = 0; i < k; ++i) {
      if (w[i] == depth) p = verts[i];
    }
    out.push_back(std::move(p));
  });
  return out;
}

double cross(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool is_simplex(const std::vector<Vector>& verts) {
  return verts.size() <= static_cast<std::size_t>(verts.front().size()) + 1 &&
         affinely_independent(verts);
}

}  // namespace

void validate_region(const ConvexRegion& X) {
  std::visit(Overloaded{
                 [](const FullSpace& s) {
                   if (s.dimension <= 0) throw InputError("fullspace dimension must be positive");
                 },
                 [](const Interval1D& iv) {
                   if (std::isnan(iv.lower) || std::isnan(iv.upper) || iv.lower > iv.upper ||
                       iv.lower == kInf || iv.upper == -kInf) {
                     throw InputError("interval needs lower <= upper");
                   }
                 },
                 [](const VertexPolytope& p) {
                   if (p.vertices.empty()) throw InputError("polytope needs at least one vertex");
                   const auto n = p.vertices.front().size();
                   if (n == 0) throw InputError("polytope vertices must be nonempty vectors");
                   for (const auto& v : p.vertices) {
                     if (v.size() != n || !v.allFinite()) {
                       throw InputError("polytope vertices must be finite and of equal length");
                     }
                   }
                   for (const auto& r : p.rays) {
                     if (r.size() != n || !r.allFinite()) {
                       throw InputError("rays must be finite and match the vertex dimension");
                     }
                     if (r.cwiseAbs().maxCoeff() == 0.0) throw InputError("rays must be nonzero");
                   }
                 },
             },
             X);
}

int region_dimension(const ConvexRegion& X) {
  return std::visit(Overloaded{
                        [](const FullSpace& s) { return s.dimension; },
                        [](const Interval1D&) { return 1; },
                        [](const VertexPolytope& p) {
                          return p.vertices.empty() ? 0 : static_cast<int>(p.vertices.front().size());
                        },
                    },
                    X);
}

bool is_bounded(const ConvexRegion& X) {
  return std::visit(Overloaded{
                        [](const FullSpace&) { return false; },
                        [](const Interval1D& iv) {
                          return std::isfinite(iv.lower) && std::isfinite(iv.upper);
                        },
                        [](const VertexPolytope& p) { return p.rays.empty(); },
                    },
                    X);
}

std::string describe(const ConvexRegion& X) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const FullSpace& s) { os << "R^" << s.dimension; },
                 [&](const Interval1D& iv) { os << "[" << iv.lower << ", " << iv.upper << "]"; },
                 [&](const VertexPolytope& p) {
                   os << "conv{";
                   for (std::size_t i = 0; i < p.vertices.size(); ++i) {
                     os << (i ? ", " : "") << format_vector(p.vertices[i]);
                   }
                   os << "}";
                   if (!p.rays.empty()) os << " + cone of " << p.rays.size() << " rays";
                 },
             },
             X);
  return os.str();
}

double support_function(const ConvexRegion& X, const Vector& y) {
  if (y.size() != region_dimension(X)) throw InputError("support_function: dimension mismatch");
  return std::visit(Overloaded{
                        [&](const FullSpace&) {
                          return y.cwiseAbs().maxCoeff() <= kRayTol ? 0.0 : kInf;
                        },
                        [&](const Interval1D& iv) {
                          const double t = y[0];
                          if (t > kRayTol) return std::isfinite(iv.upper) ? t * iv.upper : kInf;
                          if (t < -kRayTol) return std::isfinite(iv.lower) ? t * iv.lower : kInf;
                          double best = 0.0;
                          bool any = false;
                          for (double e : {iv.lower, iv.upper}) {
                            if (std::isfinite(e)) {
                              best = any ? std::max(best, t * e) : t * e;
                              any = true;
                            }
                          }
                          return best;
                        },
                        [&](const VertexPolytope& p) {
                          for (const auto& r : p.rays) {
                            if (y.dot(r) > kRayTol) return kInf;
                          }
                          double best = -kInf;
                          for (const auto& v : p.vertices) best = std::max(best, y.dot(v));
                          return best;
                        },
                    },
                    X);
}

RecessionDual1D recession_dual_1d(const Interval1D& X) {
  const bool lo = std::isfinite(X.lower);
  const bool hi = std::isfinite(X.upper);
  if (lo && hi) return {Cone1D::Zero, Cone1D::Line};
  if (lo) return {Cone1D::NonNegative, Cone1D::NonNegative};
  if (hi) return {Cone1D::NonPositive, Cone1D::NonPositive};
  return {Cone1D::Line, Cone1D::Zero};
}

std::string to_string(Cone1D cone) {
  switch (cone) {
    case Cone1D::Zero:
      return "{0}";
    case Cone1D::NonNegative:
      return "[0,inf)";
    case Cone1D::NonPositive:
      return "(-inf,0]";
    case Cone1D::Line:
      return "R";
  }
  return "?";
}

std::size_t default_anchor(const std::vector<Vector>& A) {
  if (A.empty()) throw InputError("anchor of an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < A.size(); ++i) {
    if (std::lexicographical_compare(A[i].begin(), A[i].end(), A[best].begin(), A[best].end())) {
      best = i;
    }
  }
  return best;
}

std::vector<std::size_t> moment_indices(std::size_t size, std::size_t anchor) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < size; ++i) {
    if (i != anchor) idx.push_back(i);
  }
  return idx;
}

Vector moment_map(const std::vector<Vector>& A, std::size_t anchor, const Vector& x) {
  if (anchor >= A.size()) throw InputError("anchor index out of range");
  const auto idx = moment_indices(A.size(), anchor);
  Vector v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (A[idx[k]].size() != x.size()) throw InputError("moment_map: dimension mismatch");
    const double e = (A[idx[k]] - A[anchor]).dot(x);
    if (std::abs(e) > kMaxExponent) {
      throw RangeError("moment coordinate exp(" + std::to_string(e) + ") is out of range");
    }
    v[static_cast<Eigen::Index>(k)] = std::exp(e);
  }
  return v;
}

Vector recover_point(const std::vector<Vector>& A, std::size_t anchor, const Vector& v,
                     double* residual) {
  if (anchor >= A.size()) throw InputError("anchor index out of range");
  const auto idx = moment_indices(A.size(), anchor);
  if (v.size() != static_cast<Eigen::Index>(idx.size())) {
    throw InputError("recover_point: expected " + std::to_string(idx.size()) + " coordinates");
  }
  if (idx.empty()) throw StructureError("recover_point: A has a single point");
  if (!(v.array() > 0.0).all()) {
    throw NotInImageError("moment point " + format_vector(v) + " has a nonpositive entry");
  }
  const auto n = A[anchor].size();
  const auto rows = static_cast<Eigen::Index>(idx.size());
  Matrix M(rows, n);
  for (Eigen::Index k = 0; k < rows; ++k) M.row(k) = (A[idx[k]] - A[anchor]).transpose();
  const Vector rhs = v.array().log().matrix();

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
  cod.setThreshold(kRankThreshold);
  if (cod.rank() < std::min<Eigen::Index>(rows, n)) {
    throw StructureError("recover_point: the differences alpha - anchor are linearly dependent");
  }
  Vector x = cod.solve(rhs);
  const double res = (M * x - rhs).cwiseAbs().maxCoeff();
  if (residual) *residual = res;
  if (res > kLinTol * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
    throw NotInImageError("moment point " + format_vector(v) + " is not in the image (residual " +
                          std::to_string(res) + ")");
  }
  return x;
}

std::vector<Vector> convex_hull_2d(std::vector<Vector> points) {
  std::sort(points.begin(), points.end(), [](const Vector& a, const Vector& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  points = dedupe(points);
  if (points.size() < 3) return points;
  std::vector<Vector> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Vector> sample_region(const ConvexRegion& X, int depth) {
  validate_region(X);
  if (!is_bounded(X)) throw UnsupportedRegionError("cannot grid the unbounded region " + describe(X));
  depth = std::max(depth, 0);
  if (const auto* iv = std::get_if<Interval1D>(&X)) {
    if (iv->lower == iv->upper) return {Vector::Constant(1, iv->lower)};
    const int steps = std::max(depth, 1);
    std::vector<Vector> out;
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      out.push_back(Vector::Constant(1, i == steps ? iv->upper : iv->lower + t * (iv->upper - iv->lower)));
    }
    return out;
  }
  const auto& P = std::get<VertexPolytope>(X);
  const auto verts = dedupe(P.vertices);
  if (verts.size() == 1) return verts;
  if (is_simplex(verts)) return simplex_grid(verts, depth);
  if (verts.front().size() == 2) {
    const auto hull = convex_hull_2d(verts);
    if (hull.size() == 2) return simplex_grid(hull, depth);
    if (depth == 0) return hull;
    std::vector<Vector> out;
    for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
      auto tri = simplex_grid({hull[0], hull[i], hull[i + 1]}, depth);
      // Skip the shared edge hull[0]-hull[i] after the first triangle.
      for (auto& p : tri) {
        if (i > 1) {
          const double c = cross(hull[0], hull[i], p);
          const double len = (hull[i] - hull[0]).norm();
          if (std::abs(c) <= 1e-12 * (1.0 + len * len)) continue;
        }
        out.push_back(std::move(p));
      }
    }
    return out;
  }
  const int k = static_cast<int>(verts.size());
  int d = depth;
  while (d > 1 && binomial(d + k - 1, k - 1) > 2e5) --d;
  return dedupe(simplex_grid(verts, d));
}

std::vector<Vector> spot_points(const ConvexRegion& X, int n, double reach) {
  validate_region(X);
  n = std::max(n, 2);
  if (const auto* full = std::get_if<FullSpace>(&X)) {
    const int dim = full->dimension;
    const int k = std::max(2, static_cast<int>(std::floor(std::pow(n, 1.0 / dim) + 1e-9)));
    std::vector<Vector> out;
    std::vector<int> idx(dim, 0);
    while (true) {
      Vector p(dim);
      for (int i = 0; i < dim; ++i) p[i] = -reach + 2.0 * reach * idx[i] / (k - 1);
      out.push_back(p);
      int i = 0;
      while (i < dim && ++idx[i] == k) idx[i++] = 0;
      if (i == dim) break;
    }
    return out;
  }
  if (const auto* iv = std::get_if<Interval1D>(&X)) {
    double lo = iv->lower, hi = iv->upper;
    if (!std::isfinite(lo)) lo = std::isfinite(hi) ? hi - 2.0 * reach : -reach;
    if (!std::isfinite(hi)) hi = std::isfinite(iv->lower) ? lo + 2.0 * reach : reach;
    return sample_region(Interval1D{lo, hi}, n - 1);
  }
  const auto& P = std::get<VertexPolytope>(X);
  const ConvexRegion base_region = VertexPolytope{P.vertices, {}};
  std::vector<Vector> base;
  for (int depth = 1; depth <= 200; ++depth) {
    base = sample_region(base_region, depth);
    if (static_cast<int>(base.size()) >= (P.rays.empty() ? n : n / 4)) break;
  }
  if (P.rays.empty()) return base;
  std::vector<Vector> out = base;
  for (const auto& p : base) {
    for (const auto& r : P.rays) {
      for (double t : {0.25, 0.5, 1.0}) out.push_back(p + t * reach * r / r.norm());
    }
  }
  return out;
}

bool contains(const ConvexRegion& X, const Vector& x, double tol) {
  if (x.size() != region_dimension(X)) return false;
  if (std::holds_alternative<FullSpace>(X)) return x.allFinite();
  if (const auto* iv = std::get_if<Interval1D>(&X)) {
    return x[0] >= iv->lower - tol && x[0] <= iv->upper + tol;
  }
  const auto& P = std::get<VertexPolytope>(X);
  const auto n = x.size();
  const auto nv = static_cast<Eigen::Index>(P.vertices.size());
  const auto nr = static_cast<Eigen::Index>(P.rays.size());
  if (nr == 0 && is_simplex(P.vertices)) {
    Matrix M(n + 1, nv);
    for (Eigen::Index j = 0; j < nv; ++j) {
      M.block(0, j, n, 1) = P.vertices[j];
      M(n, j) = 1.0;
    }
    Vector rhs(n + 1);
    rhs << x, 1.0;
    const Vector mu = M.colPivHouseholderQr().solve(rhs);
    const double res = (M * mu - rhs).cwiseAbs().maxCoeff();
    return res <= tol && mu.minCoeff() >= -tol;
  }
  // L1 distance LP: V mu + R t + s+ - s- = x, sum mu = 1.
  const Eigen::Index cols = nv + nr + 2 * n;
  Matrix M = Matrix::Zero(n + 1, cols);
  for (Eigen::Index j = 0; j < nv; ++j) {
    M.block(0, j, n, 1) = P.vertices[j];
    M(n, j) = 1.0;
  }
  for (Eigen::Index j = 0; j < nr; ++j) M.block(0, nv + j, n, 1) = P.rays[j];
  M.block(0, nv + nr, n, n) = Matrix::Identity(n, n);
  M.block(0, nv + nr + n, n, n) = -Matrix::Identity(n, n);
  Vector rhs(n + 1);
  rhs << x, 1.0;
  Vector cost = Vector::Zero(cols);
  cost.tail(2 * n).setOnes();
  const auto r = lp::solve_standard(M, rhs, cost);
  return r.status == lp::Status::Optimal && r.value <= tol;
}

MomentRegion build_moment_region(const ConvexRegion& X, const std::vector<Vector>& A,
                                 std::size_t anchor, MomentMode mode, int depth) {
  validate_region(X);
  if (A.empty()) throw InputError("moment region needs a nonempty A");
  if (anchor >= A.size()) throw InputError("anchor index out of range");
  if (region_dimension(X) != A.front().size()) throw InputError("region and A dimensions differ");
  MomentRegion Y;
  Y.A = A;
  Y.anchor = anchor;
  if (std::holds_alternative<FullSpace>(X)) {
    Y.kind = MomentKind::PositiveOrthantImage;
    return Y;
  }
  if (!is_bounded(X)) {
    throw UnsupportedRegionError("moment region for the unbounded region " + describe(X) +
                                 " is not supported");
  }
  Y.kind = MomentKind::SampledHull;
  const auto pts = sample_region(X, mode == MomentMode::ExactPolytopeVertices ? 0 : depth);
  const auto m = static_cast<Eigen::Index>(A.size()) - 1;
  Y.atoms.resize(m, static_cast<Eigen::Index>(pts.size()));
  Y.preimages.resize(region_dimension(X), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Y.atoms.col(static_cast<Eigen::Index>(k)) = moment_map(A, anchor, pts[k]);
    Y.preimages.col(static_cast<Eigen::Index>(k)) = pts[k];
  }
  return Y;
}

MomentRegion moment_polytope(const std::vector<Vector>& A, std::size_t anchor,
                             const std::vector<Vector>& vertices) {
  if (anchor >= A.size()) throw InputError("anchor index out of range");
  if (vertices.empty()) throw InputError("moment polytope needs at least one vertex");
  MomentRegion Y;
  Y.kind = MomentKind::VertexPolytope;
  Y.A = A;
  Y.anchor = anchor;
  const auto m = static_cast<Eigen::Index>(A.size()) - 1;
  const auto K = static_cast<Eigen::Index>(vertices.size());
  Y.atoms.resize(m, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (vertices[k].size() != m) throw InputError("moment vertex has the wrong length");
    if (!(vertices[k].array() > 0.0).all()) {
      throw InputError("moment vertex " + format_vector(vertices[k]) + " is not strictly positive");
    }
    Y.atoms.col(k) = vertices[k];
  }
  try {
    Matrix pre(A.front().size(), K);
    for (Eigen::Index k = 0; k < K; ++k) pre.col(k) = recover_point(A, anchor, Y.atoms.col(k));
    Y.preimages = std::move(pre);
  } catch (const Error&) {
    Y.preimages.resize(0, 0);
  }
  return Y;
}

AffineHull atom_affine_hull(const MomentRegion& Y, double tol) {
  AffineHull hull;
  const auto m = Y.atoms.rows();
  if (Y.kind == MomentKind::PositiveOrthantImage || Y.atoms.cols() == 0) {
    hull.E.resize(0, m);
    hull.e.resize(0);
    return hull;
  }
  const Vector base = Y.atoms.col(0);
  Matrix D = Y.atoms.colwise() - base;
  Eigen::JacobiSVD<Matrix> svd(D, Eigen::ComputeFullU);
  const Vector s = svd.singularValues();
  const double top = s.size() ? s[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol * std::max(1.0, top)) ++rank;
  }
  hull.E = svd.matrixU().rightCols(m - rank).transpose();
  hull.e = hull.E * base;
  return hull;
}

ConvexityVerdict a_convexity_diagnostic(const VertexPolytope& X, const std::vector<Vector>& A,
                                        std::size_t anchor, int depth) {
  const ConvexRegion region = X;
  validate_region(region);
  if (!X.rays.empty()) throw UnsupportedRegionError("a_convexity_diagnostic needs a bounded X");
  const auto pts = sample_region(region, depth);
  std::vector<Vector> images;
  for (const auto& p : pts) images.push_back(moment_map(A, anchor, p));

  ConvexityVerdict out;
  constexpr std::size_t kMaxPairs = 20000;
  const std::size_t total = pts.size() * (pts.size() - 1) / 2;
  const std::size_t stride = std::max<std::size_t>(1, total / kMaxPairs);
  std::size_t counter = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (counter++ % stride) continue;
      ++out.pairs_checked;
      const Vector mid = 0.5 * (images[i] + images[j]);
      Vector x;
      try {
        x = recover_point(A, anchor, mid);
      } catch (const NotInImageError& e) {
        out.consistent = false;
        out.x1 = pts[i];
        out.x2 = pts[j];
        out.detail = e.what();
        return out;
      }
      if (!contains(region, x, 1e-7)) {
        out.consistent = false;
        out.x1 = pts[i];
        out.x2 = pts[j];
        out.recovered = x;
        out.detail = "midpoint of the images of " + format_vector(pts[i]) + " and " +
                     format_vector(pts[j]) + " recovers to " + format_vector(x) + ", outside X";
        return out;
      }
    }
  }
  out.detail = "no violation among " + std::to_string(out.pairs_checked) + " sampled pairs";
  return out;
}

}  // namespace sagesimplex
