#include <cmath>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sagesimplex/oracle.hpp"
#include "sagesimplex/solver.hpp"

using namespace sagesimplex;
using namespace testing_helpers;

namespace {

bool has_candidate(const GridMinResult& r, const Vector& x, double tol) {
  for (const auto& c : r.candidates) {
    if ((c.x - x).norm() <= tol) return true;
  }
  return false;
}

const ConvexRegion kBox0201 = VertexPolytope{{vec({0, 0}), vec({2, 0}), vec({0, 1}), vec({2, 1})}, {}};

}  // namespace

TEST(GridMin, TwoCircuitTriangle) {
  const GridMinResult r = grid_min(two_circuit(), VertexPolytope{triangle(), {}}, 100);
  EXPECT_LE(std::abs(r.value), 1e-6);
  EXPECT_NEAR(r.argmin.norm(), 0.0, 1e-3);
}

TEST(GridMin, SquaredProductTwoMinimizers) {
  const Signomial f = load_problem("squared_product.json").f;
  const GridMinResult r = grid_min(f, kBox0201, 200);
  EXPECT_LE(std::abs(r.value), 1e-6);
  EXPECT_TRUE(has_candidate(r, vec({std::log(2.0), 0}), 1e-3));
  EXPECT_TRUE(has_candidate(r, vec({std::log(3.0), 0}), 1e-3));
  EXPECT_LE(r.candidates.size(), 5u);
}

TEST(GridMin, Constant) {
  EXPECT_EQ(grid_min(Signomial::constant(2, 5.0), kBox0201, 10).value, 5.0);
}

TEST(GridMin, UnboundedIsAnInputError) {
  EXPECT_THROW(grid_min(two_circuit(), FullSpace{2}, 10), InputError);
  EXPECT_THROW(grid_min(two_circuit(), VertexPolytope{{vec({0, 0})}, {vec({1, 0})}}, 10), InputError);
}

TEST(GridMin, UpperBoundsMomentProgramProperty) {
  // On the sampled triangle the moment program minimizes over the hull of the
  // atoms, which contains every grid point's image.
  Gen gen(111);
  const ConvexRegion X = VertexPolytope{triangle(), {}};
  for (int trial = 0; trial < 10; ++trial) {
    const Signomial f = two_circuit(gen.uniform(-3, 3));
    const SupportPartition part = partition_support(f);
    const MomentRegion Y = build_moment_region(X, part.positive, 0, MomentMode::Sample, 100);
    const double moment = moment_program(f, part, Y).solve.value;
    const double grid = grid_min(f, X, 100).value;
    EXPECT_GE(grid, moment - 1e-9);
    EXPECT_NEAR(grid, moment, 1e-4);
  }
}

TEST(GlobalMinEstimate, Examples) {
  const GridMinResult r = global_min_estimate(two_circuit(), 3, 100);
  EXPECT_NEAR(r.value, -7.0, 1e-4);
  EXPECT_NEAR((r.argmin - Vector::Constant(2, std::log(std::sqrt(2.0)))).norm(), 0.0, 1e-3);
  const GridMinResult sq = global_min_estimate(load_problem("perfect_square.json").f, 3, 100);
  EXPECT_NEAR(sq.value, 0.0, 1e-9);
  EXPECT_NEAR(sq.argmin[0], 0.0, 1e-4);
  EXPECT_EQ(global_min_estimate(Signomial::constant(1, 1.0), 3, 20).value, 1.0);
}

TEST(GlobalMinEstimate, ExpandsTowardBoundary) {
  // e^{-x} + e^{x - 8} is minimized at x = 4, beyond the initial box.
  const Signomial f(1, {{1.0, scalar(-1)}, {1.0, scalar(1)}});
  const Signomial shifted(1, {{1.0, scalar(-1)}, {std::exp(-8.0), scalar(1)}});
  EXPECT_NEAR(global_min_estimate(f, 1, 100).value, 2.0, 1e-9);
  const GridMinResult r = global_min_estimate(shifted, 1, 200);
  EXPECT_NEAR(r.argmin[0], 4.0, 1e-3);
  EXPECT_FALSE(r.boundary_limited);
}

TEST(Falsify, Examples) {
  EXPECT_TRUE(falsify(Signomial::constant(2, -1.0), FullSpace{2}).has_value());
  EXPECT_TRUE(falsify(Signomial::constant(1, -1.0), Interval1D{0, 1}).has_value());
  // Shifted minimum -0.1 at (ln sqrt2, ln sqrt2).
  const auto w = falsify(two_circuit(6.9), FullSpace{2});
  ASSERT_TRUE(w.has_value());
  EXPECT_LT(two_circuit(6.9)(*w), -kEvalTol);
  EXPECT_NEAR((*w - Vector::Constant(2, std::log(std::sqrt(2.0)))).norm(), 0.0, 0.2);
  EXPECT_FALSE(falsify(two_circuit(), VertexPolytope{triangle(), {}}).has_value());
  EXPECT_FALSE(falsify(two_circuit(7), FullSpace{2}).has_value());
}

TEST(Falsify, WitnessesAreRealProperty) {
  Gen gen(113);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = gen.integer(1, 5);
    std::vector<Term> ts;
    for (int i = 0; i < k; ++i) ts.push_back({gen.uniform(-2, 2), gen.vector(2, -2, 2)});
    const Signomial f(2, std::move(ts));
    const ConvexRegion X = trial % 2 ? ConvexRegion{FullSpace{2}} : kBox0201;
    const auto w = falsify(f, X, 500, static_cast<std::uint64_t>(trial));
    if (!w) continue;
    EXPECT_LT(f(*w), -kEvalTol);
    EXPECT_TRUE(contains(X, *w, 1e-9));
  }
}

TEST(FindRoots, Examples) {
  const auto sq = find_roots_1d(load_problem("perfect_square.json").f, Interval1D{-1, 1});
  ASSERT_EQ(sq.size(), 1u);
  EXPECT_NEAR(sq[0].x, 0.0, 1e-6);
  EXPECT_EQ(sq[0].multiplicity, 2);

  const Signomial f39 = load_problem("squared_product.json").f;
  std::vector<Term> slice;
  for (const auto& t : f39.terms()) slice.push_back({t.coefficient, scalar(t.exponent[0])});
  const auto roots = find_roots_1d(Signomial(1, slice), Interval1D{0, 2});
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0].x, std::log(2.0), 1e-6);
  EXPECT_NEAR(roots[1].x, std::log(3.0), 1e-6);
  EXPECT_EQ(roots[0].multiplicity, 2);
  EXPECT_EQ(roots[1].multiplicity, 2);

  EXPECT_TRUE(find_roots_1d(Signomial(1, {{1.0, scalar(1)}}), Interval1D{-1, 1}).empty());
  EXPECT_THROW(find_roots_1d(Signomial(1, {{1.0, scalar(1)}}), Interval1D{0, kInf}), InputError);
}

TEST(FindRoots, SimpleRoots) {
  // (e^x - 1)(e^x - 2)(e^x - 4) = e^{3x} - 7e^{2x} + 14e^x - 8.
  const Signomial f(1, {{1.0, scalar(3)}, {-7.0, scalar(2)}, {14.0, scalar(1)}, {-8.0, scalar(0)}});
  const auto roots = find_roots_1d(f, Interval1D{-1, 2});
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0].x, 0.0, 1e-8);
  EXPECT_NEAR(roots[1].x, std::log(2.0), 1e-8);
  EXPECT_NEAR(roots[2].x, std::log(4.0), 1e-8);
  for (const auto& r : roots) EXPECT_EQ(r.multiplicity, 1);
}
