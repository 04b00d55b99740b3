#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "sagesimplex/core.hpp"

namespace sagesimplex {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// A direction with <y, r> above this on some ray has infinite support value.
inline constexpr double kRayTol = 1e-10;
/// Residual allowed when mapping moment coordinates back to x.
inline constexpr double kLinTol = 1e-8;

struct FullSpace {
  int dimension = 1;
};

struct Interval1D {
  double lower = -kInf;
  double upper = kInf;
};

struct VertexPolytope {
  std::vector<Vector> vertices;
  std::vector<Vector> rays;
};

using ConvexRegion = std::variant<FullSpace, Interval1D, VertexPolytope>;

/// Throws InputError when the region violates its invariants.
void validate_region(const ConvexRegion& X);
int region_dimension(const ConvexRegion& X);
bool is_bounded(const ConvexRegion& X);
std::string describe(const ConvexRegion& X);

double support_function(const ConvexRegion& X, const Vector& y);

enum class Cone1D { Zero, NonNegative, NonPositive, Line };

struct RecessionDual1D {
  Cone1D rec;
  Cone1D dual;
};

RecessionDual1D recession_dual_1d(const Interval1D& X);
std::string to_string(Cone1D cone);

/// Lexicographically smallest point of A.
std::size_t default_anchor(const std::vector<Vector>& A);
/// Indices of A without the anchor, in A order. These index moment coordinates.
std::vector<std::size_t> moment_indices(std::size_t size, std::size_t anchor);

Vector moment_map(const std::vector<Vector>& A, std::size_t anchor, const Vector& x);
Vector recover_point(const std::vector<Vector>& A, std::size_t anchor, const Vector& v,
                     double* residual = nullptr);

/// Deterministic grid over a bounded region. Depth 0 gives the vertices.
/// Simplices use a barycentric grid with depth subdivisions per edge, planar
/// polygons are fan-triangulated, other polytopes use vertex compositions.
std::vector<Vector> sample_region(const ConvexRegion& X, int depth);

/// About n deterministic points of any region. Unbounded directions are
/// truncated at distance `reach`.
std::vector<Vector> spot_points(const ConvexRegion& X, int n, double reach = 3.0);

/// Membership of x in X up to tol (distance for polytopes).
bool contains(const ConvexRegion& X, const Vector& x, double tol = 1e-9);

enum class MomentKind { PositiveOrthantImage, VertexPolytope, SampledHull };
enum class MomentMode { ExactPolytopeVertices, Sample };

struct MomentRegion {
  MomentKind kind = MomentKind::PositiveOrthantImage;
  std::vector<Vector> A;
  std::size_t anchor = 0;
  /// Atoms as columns, in moment coordinates. Empty for the orthant.
  Matrix atoms;
  /// Preimages of the atoms in x-space, same column order. May be empty when
  /// the atoms were given directly and do not all lie in the image of phi.
  Matrix preimages;

  int dimension() const { return static_cast<int>(A.size()) - 1; }
  std::size_t atom_count() const { return static_cast<std::size_t>(atoms.cols()); }
};

MomentRegion build_moment_region(const ConvexRegion& X, const std::vector<Vector>& A,
                                 std::size_t anchor, MomentMode mode, int depth = 10);

/// A polytope given directly in moment coordinates.
MomentRegion moment_polytope(const std::vector<Vector>& A, std::size_t anchor,
                             const std::vector<Vector>& vertices);

/// Affine equations E v = e satisfied by every atom (rows of E orthonormal).
/// Empty when the atoms span the full moment space.
struct AffineHull {
  Matrix E;
  Vector e;
};
AffineHull atom_affine_hull(const MomentRegion& Y, double tol = 1e-9);

struct ConvexityVerdict {
  bool consistent = true;
  Vector x1, x2;
  /// Recovered preimage of the midpoint, empty when it has none.
  Vector recovered;
  std::size_t pairs_checked = 0;
  std::string detail;
};

/// Heuristic test of A-convexity: midpoints of sampled image points must map
/// back into X. A consistent verdict is not a proof.
ConvexityVerdict a_convexity_diagnostic(const VertexPolytope& X, const std::vector<Vector>& A,
                                        std::size_t anchor, int depth);

/// Convex hull of planar points in counterclockwise order.
std::vector<Vector> convex_hull_2d(std::vector<Vector> points);

}  // namespace sagesimplex
