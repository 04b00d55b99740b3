#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sagesimplex/core.hpp"
#include "sagesimplex/geometry.hpp"
#include "sagesimplex/univariate.hpp"

namespace sagesimplex {

struct GridCandidate {
  Vector x;
  double value = 0.0;
};

struct GridMinResult {
  double value = kInf;
  Vector argmin;
  /// Up to five well-separated grid points after local descent, best first.
  std::vector<GridCandidate> candidates;
  std::size_t points = 0;
  /// The minimizer sits on the boundary of a truncated search box.
  bool boundary_limited = false;
};

/// Grid scan of a bounded region with `resolution` subdivisions, refined by
/// 50 steps of local descent from the best five separated points.
GridMinResult grid_min(const Signomial& f, const ConvexRegion& X, int resolution);

/// grid_min over [-w, w]^n, doubling w up to three times while the minimizer
/// is on the box boundary.
GridMinResult global_min_estimate(const Signomial& f, double box_halfwidth, int resolution);

/// A point of X with f(x) < -tol, found by grid, random and descent search
/// with a fixed seed.
std::optional<Vector> falsify(const Signomial& f, const ConvexRegion& X, int budget = 4000,
                              std::uint64_t seed = 12345, double tol = kEvalTol);

/// Roots of a univariate f on a bounded interval: sign changes on a grid
/// refined by bisection, plus interior extrema that touch zero.
std::vector<RootEstimate> find_roots_1d(const Signomial& f, const Interval1D& X, int resolution = 2000);

}  // namespace sagesimplex
