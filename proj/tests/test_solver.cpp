#include <cmath>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sagesimplex/certificates.hpp"
#include "sagesimplex/solver.hpp"

using namespace sagesimplex;
using namespace testing_helpers;

namespace {

const std::vector<Vector> kA33{vec({0, 0}), vec({4, 2}), vec({2, 4})};

SmoothFunction quadratic(const Vector& p) {
  return {[p](const Vector& v) { return (v - p).squaredNorm(); },
          [p](const Vector& v) -> Vector { return 2.0 * (v - p); }};
}

Vector full_v(const MomentObjective& obj, const Vector& v) {
  Vector w = Vector::Ones(obj.c.size());
  for (std::size_t i = 0; i < obj.coords.size(); ++i) w[static_cast<Eigen::Index>(obj.coords[i])] = v[i];
  return w;
}

}  // namespace

TEST(PowerCone, Examples) {
  EXPECT_TRUE(powercone_contains({vec({1, 1}), 1.0, vec({0.5, 0.5})}));
  EXPECT_TRUE(powercone_contains({vec({4, 1}), 2.0, vec({0.5, 0.5})}));
  EXPECT_FALSE(powercone_contains({vec({1, 1}), 1.01, vec({0.5, 0.5})}));
  EXPECT_TRUE(powercone_contains({vec({0, 1}), 0.0, vec({0.5, 0.5})}));
  EXPECT_FALSE(powercone_contains({vec({0, 1}), 0.1, vec({0.5, 0.5})}));
  EXPECT_TRUE(powercone_contains({vec({4, 1}), -2.0, vec({0.5, 0.5})}));
}

TEST(FrankWolfe, InteriorOptimum) {
  Matrix atoms(2, 4);
  atoms << 0, 1, 0, 1, 0, 0, 1, 1;
  const SolveReport r = minimize_fw(quadratic(vec({0.3, 0.6})), atoms, {1e-10, 10000, 10000});
  EXPECT_EQ(r.status, SolveStatus::Converged);
  EXPECT_NEAR(r.value, 0.0, 1e-9);
  EXPECT_NEAR((r.minimizer - vec({0.3, 0.6})).norm(), 0.0, 1e-4);
}

TEST(FrankWolfe, LinearPicksVertex) {
  Matrix atoms(2, 3);
  atoms << 0, 2, 1, 0, 1, 3;
  SmoothFunction F{[](const Vector& v) { return v[0] - v[1]; },
                   [](const Vector&) -> Vector { return vec({1, -1}); }};
  const SolveReport r = minimize_fw(F, atoms);
  EXPECT_EQ(r.status, SolveStatus::Converged);
  EXPECT_LE(r.iterations, 1);
  EXPECT_NEAR(r.value, -2.0, 1e-12);
  EXPECT_NEAR((r.minimizer - vec({1, 3})).norm(), 0.0, 1e-12);
}

TEST(FrankWolfe, CertificateAndMonotoneDescentProperty) {
  Gen gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = gen.integer(1, 4);
    const int k = gen.integer(1, 30);
    Matrix atoms(m, k);
    for (int j = 0; j < k; ++j) atoms.col(j) = gen.vector(m, -1, 1);
    const Vector p = gen.vector(m, -1.5, 1.5);
    const Vector w = gen.vector(m, 0.2, 3);
    SmoothFunction F{[p, w](const Vector& v) { return (w.array() * (v - p).array().square()).sum() + std::exp(v[0]); },
                     [p, w](const Vector& v) -> Vector {
                       Vector g = 2.0 * (w.array() * (v - p).array()).matrix();
                       g[0] += std::exp(v[0]);
                       return g;
                     }};
    const SolveReport r = minimize_fw(F, atoms, {1e-8, 10000, 10000});
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1] + 1e-12);
    if (r.status != SolveStatus::Converged) continue;
    EXPECT_LE(r.gap, 1e-8);
    for (int j = 0; j < k; ++j) EXPECT_GE(F.value(atoms.col(j)), r.value - r.gap - 1e-12);
  }
}

TEST(Minimize1D, Examples) {
  auto r = minimize_1d([](double x) { return (x - 3) * (x - 3); }, Interval1D{0, 10});
  EXPECT_NEAR(r.minimizer[0], 3.0, 1e-6);
  r = minimize_1d([](double x) { return std::exp(x) - x; }, Interval1D{});
  EXPECT_NEAR(r.minimizer[0], 0.0, 1e-6);
  r = minimize_1d([](double x) { return std::exp(x) - x; }, Interval1D{}, {},
                  [](double x) { return std::exp(x) - 1; });
  EXPECT_NEAR(r.minimizer[0], 0.0, 1e-8);
  r = minimize_1d([](double x) { return std::exp(x); }, Interval1D{2, kInf});
  EXPECT_NEAR(r.minimizer[0], 2.0, 1e-8);
}

TEST(Minimize1D, TwoCircuitDiagonalMinimizer) {
  auto f1 = [](double t) { return 16 + std::exp(6 * t) - 12 * std::exp(2 * t); };
  const auto r = minimize_1d(f1, Interval1D{});
  EXPECT_NEAR(r.minimizer[0], std::log(std::sqrt(2.0)), 1e-6);
  EXPECT_NEAR(r.value, 0.0, 1e-9);
}

TEST(EntropySigma, FullSpaceClosedForm) {
  const std::vector<Vector> A{scalar(0), scalar(2)};
  const SolveReport r = minimize_entropy_sigma(vec({1, 1}), scalar(1), A, FullSpace{1});
  EXPECT_NEAR(r.value, -2.0, 1e-9);
  EXPECT_NEAR((r.minimizer - vec({1, 1})).norm(), 0.0, 1e-6);
}

TEST(EntropySigma, PointRegion) {
  const std::vector<Vector> A{scalar(0), scalar(2)};
  const SolveReport r = minimize_entropy_sigma(vec({1, 1}), scalar(1), A, VertexPolytope{{scalar(0)}, {}});
  EXPECT_NEAR(r.value, -2.0, 1e-9);
  EXPECT_NEAR((r.minimizer - vec({1, 1})).norm(), 0.0, 1e-6);
}

TEST(EntropySigma, ZeroCoefficientPinned) {
  const std::vector<Vector> A{scalar(0), scalar(2)};
  const SolveReport r = minimize_entropy_sigma(vec({1, 0}), scalar(1), A, Interval1D{-1, 1});
  EXPECT_NEAR(r.minimizer[1], 0.0, 1e-12);
  EXPECT_NEAR(r.value, entropy_sigma_objective(vec({1, 0}), scalar(1), A, Interval1D{-1, 1}, r.minimizer), 1e-9);
  const SolveReport zero = minimize_entropy_sigma(vec({0, 0}), scalar(1), A, Interval1D{-1, 1});
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_EQ(zero.minimizer.norm(), 0.0);
}

TEST(EntropySigma, IntervalMatchesDualMinimum) {
  // min over [0,1] of e^{-x} + e^{x}: value 2 at x = 0.
  const std::vector<Vector> A{scalar(0), scalar(2)};
  const SolveReport r = minimize_entropy_sigma(vec({1, 1}), scalar(1), A, Interval1D{0.5, 1});
  const double dual = std::exp(-0.5) + std::exp(0.5);
  EXPECT_NEAR(r.value, -dual, 1e-8);
}

TEST(EntropySigma, AgreesWithCircuitNumberProperty) {
  Gen gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 4);
    const auto A = gen.simplex_vertices(n);
    const Vector lambda = gen.simplex_point(n + 1);
    Vector beta = Vector::Zero(n);
    for (int i = 0; i <= n; ++i) beta += lambda[i] * A[static_cast<std::size_t>(i)];
    const Vector c = gen.vector(n + 1, 0.1, 5);
    const double theta = circuit_number(c, lambda);
    const SolveReport r = minimize_entropy_sigma(c, beta, A, FullSpace{n});
    EXPECT_NEAR(r.value, -theta, 1e-6 * theta) << "trial " << trial;
  }
}

TEST(MomentObjective, GradientMatchesFiniteDifferencesProperty) {
  const SupportPartition part = partition_support(two_circuit(7));
  const MomentObjective obj = moment_objective(part, 0);
  Gen gen(61);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector v = gen.vector(2, 0.2, 5);
    const Vector g = obj.gradient(v);
    for (int i = 0; i < 2; ++i) {
      Vector e = Vector::Zero(2);
      e[i] = 1e-6;
      const double fd = (obj.value(v + e) - obj.value(v - e)) / 2e-6;
      EXPECT_LE(std::abs(fd - g[i]), 1e-4 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST(MomentProgram, TwoCircuitOnTriangle) {
  const Signomial f = two_circuit();
  const SupportPartition part = partition_support(f);
  const MomentRegion Y = build_moment_region(VertexPolytope{triangle(), {}}, part.positive, 0, MomentMode::Sample, 20);
  const MomentReport r = moment_program(f, part, Y);
  EXPECT_GE(r.solve.value, -1e-6);
  EXPECT_LE(r.solve.value, 1e-3);
  EXPECT_NEAR((r.v - vec({1, 1})).norm(), 0.0, 1e-2);
}

TEST(MomentProgram, TwoCircuitGlobal) {
  const Signomial f = two_circuit();
  const SupportPartition part = partition_support(f);
  const MomentRegion Y = build_moment_region(FullSpace{2}, part.positive, 0, MomentMode::Sample);
  const MomentReport r = moment_program(f, part, Y);
  EXPECT_NEAR(r.solve.value, -7.0, 1e-6);
  ASSERT_EQ(r.x.size(), 2);
  EXPECT_NEAR((r.x - Vector::Constant(2, std::log(std::sqrt(2.0)))).norm(), 0.0, 1e-4);
  EXPECT_NEAR(r.f_value, -7.0, 1e-6);
}

TEST(MomentProgram, ZEliminationOnConeBoundary) {
  const Signomial f = two_circuit();
  const SupportPartition part = partition_support(f);
  const MomentObjective obj = moment_objective(part, 0);
  const MomentRegion Y = build_moment_region(VertexPolytope{triangle(), {}}, part.positive, 0, MomentMode::Sample, 10);
  const MomentReport r = moment_program(f, part, Y);
  const Vector v = full_v(obj, r.v);
  for (std::size_t j = 0; j < obj.lambda.size(); ++j) {
    const double lhs = (obj.lambda[j].array() * v.array().log()).sum();
    EXPECT_NEAR(lhs, std::log(r.z[static_cast<Eigen::Index>(j)]), 1e-9);
    EXPECT_TRUE(powercone_contains({v, r.z[static_cast<Eigen::Index>(j)], obj.lambda[j]}));
  }
}

TEST(MomentProgram, EmptyNegativeSupportIsLinear) {
  const Signomial f(2, {{1.0, vec({0, 0})}, {2.0, vec({4, 2})}, {3.0, vec({2, 4})}});
  const SupportPartition part = partition_support(f);
  const MomentRegion Y = build_moment_region(VertexPolytope{triangle(), {}}, part.positive, 0, MomentMode::Sample, 6);
  const MomentReport r = moment_program(f, part, Y);
  double best = kInf;
  for (Eigen::Index k = 0; k < Y.atoms.cols(); ++k) {
    best = std::min(best, 1.0 + 2.0 * Y.atoms(0, k) + 3.0 * Y.atoms(1, k));
  }
  EXPECT_NEAR(r.solve.value, best, 1e-9);
}

TEST(MomentProgram, IneligibleIsAStructureError) {
  // beta = (1,4) has a negative barycentric coordinate.
  const Signomial f(2, {{1.0, vec({0, 0})}, {1.0, vec({4, 2})}, {1.0, vec({2, 4})}, {-1.0, vec({1, 4})}});
  const SupportPartition part = partition_support(f);
  const MomentRegion Y = build_moment_region(FullSpace{2}, part.positive, 0, MomentMode::Sample);
  EXPECT_THROW(moment_program(f, part, Y), StructureError);
}

TEST(ProjectSimplex, Basic) {
  EXPECT_NEAR((project_simplex(vec({0.2, 0.8})) - vec({0.2, 0.8})).norm(), 0.0, 1e-15);
  EXPECT_NEAR((project_simplex(vec({2, 0})) - vec({1, 0})).norm(), 0.0, 1e-15);
  EXPECT_NEAR(project_simplex(vec({-3, 0.5, 0.7})).sum(), 1.0, 1e-15);
}
