#include <cmath>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sagesimplex/certificates.hpp"

using namespace sagesimplex;
using namespace testing_helpers;

namespace {

const std::vector<Vector> kLine{scalar(0), scalar(2)};

// Points of X used for soundness checks: a grid for bounded regions, plus spot points.
std::vector<Vector> check_points(const ConvexRegion& X, int n) {
  std::vector<Vector> pts = spot_points(X, n);
  if (is_bounded(X)) {
    const int depth = region_dimension(X) == 1 ? n : static_cast<int>(std::sqrt(2.0 * n));
    const auto grid = sample_region(X, depth);
    pts.insert(pts.end(), grid.begin(), grid.end());
  }
  return pts;
}

}  // namespace

TEST(RelativeEntropy, Examples) {
  EXPECT_NEAR(relative_entropy(vec({1, 1}), vec({M_E, M_E})), -2.0, 1e-15);
  EXPECT_EQ(relative_entropy(vec({0.3, 2}), vec({0.3, 2})), 0.0);
  EXPECT_NEAR(relative_entropy(vec({0, 1}), vec({M_E, M_E})), -1.0, 1e-15);
  EXPECT_EQ(relative_entropy(vec({1, 1}), vec({1, 0})), kInf);
}

TEST(CircuitNumber, Examples) {
  EXPECT_NEAR(circuit_number(vec({1, 1}), vec({0.5, 0.5})), 2.0, 1e-12);
  EXPECT_NEAR(circuit_number(vec({16, 0.5, 0.5}), vec({2.0 / 3, 1.0 / 6, 1.0 / 6})), 12.0, 1e-9);
  EXPECT_NEAR(circuit_number(vec({4, 0.5, 0.5}), vec({1.0 / 3, 1.0 / 3, 1.0 / 3})), 3.0, 1e-9);
  EXPECT_EQ(circuit_number(vec({0, 1}), vec({0.5, 0.5})), 0.0);
  EXPECT_NEAR(circuit_number(vec({0, 5}), vec({0, 1})), 5.0, 1e-12);
}

TEST(AgeGlobal, Examples) {
  const AgeCertificate tight = age_global(vec({1, 1}), -2.0, scalar(1), kLine);
  EXPECT_TRUE(tight.feasible);
  EXPECT_NEAR((tight.nu - vec({1, 1})).norm(), 0.0, 1e-12);
  EXPECT_NEAR(tight.entropy_value, -2.0, 1e-12);
  EXPECT_FALSE(age_global(vec({1, 1}), -2.01, scalar(1), kLine).feasible);
  const AgeCertificate pos = age_global(vec({1, 1}), 0.5, scalar(1), kLine);
  EXPECT_TRUE(pos.feasible);
  EXPECT_GE(pos.slack, 0.0);
}

TEST(AgeGlobal, OutsideHullInfeasible) {
  EXPECT_FALSE(age_global(vec({1, 1}), -0.1, scalar(3), kLine).feasible);
  EXPECT_TRUE(age_global(vec({1, 1}), 0.0, scalar(3), kLine).feasible);
}

TEST(AgeGlobal, DependentSupportIsAStructureError) {
  EXPECT_THROW(age_global(vec({1, 1, 1}), -1, scalar(1), {scalar(0), scalar(2), scalar(3)}), StructureError);
}

TEST(AgeGlobal, ScalingAndMonotonicityProperty) {
  Gen gen(71);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 4);
    const auto A = gen.simplex_vertices(n);
    const Vector lambda = gen.simplex_point(n + 1);
    Vector beta = Vector::Zero(n);
    for (int i = 0; i <= n; ++i) beta += lambda[i] * A[static_cast<std::size_t>(i)];
    const Vector c = gen.vector(n + 1, 0.1, 4);
    const double theta = circuit_number(c, lambda);
    const double d = -theta * gen.uniform(0.5, 1.0);
    const AgeCertificate cert = age_global(c, d, beta, A);
    ASSERT_TRUE(cert.feasible);
    const double s = gen.uniform(0.1, 10);
    const AgeCertificate scaled = age_global(s * c, s * d, beta, A);
    EXPECT_TRUE(scaled.feasible);
    EXPECT_NEAR(relative_entropy(s * cert.nu, M_E * s * c), s * cert.entropy_value, 1e-9 * (1 + s * theta));
    const double d2 = d + gen.uniform(0, 3);
    EXPECT_TRUE(age_global(c, d2, beta, A).feasible);
    // The same nu keeps working at the larger d.
    EXPECT_LE(cert.entropy_value + cert.support_value, d2 + kCertTol);
    EXPECT_FALSE(age_global(c, -theta * 1.01, beta, A).feasible);
  }
}

TEST(AgeConstrained, FullSpaceMatchesGlobalProperty) {
  Gen gen(73);
  for (int trial = 0; trial < 100; ++trial) {
    const double d = gen.uniform(-3, 0.5);
    const Vector c = gen.vector(2, 0.2, 2);
    const bool expected = age_global(c, d, scalar(1), kLine).feasible;
    if (std::abs(d + circuit_number(c, vec({0.5, 0.5}))) < 1e-6) continue;
    EXPECT_EQ(age_constrained(c, d, scalar(1), kLine, FullSpace{1}).feasible, expected) << trial;
  }
}

TEST(AgeConstrained, PointRegion) {
  const ConvexRegion origin = VertexPolytope{{scalar(0)}, {}};
  const AgeCertificate cert = age_constrained(vec({1, 1}), -2.0, scalar(1), kLine, origin);
  EXPECT_TRUE(cert.feasible);
  EXPECT_NEAR((cert.nu - vec({1, 1})).norm(), 0.0, 1e-5);
  EXPECT_FALSE(age_constrained(vec({1, 1}), -2.001, scalar(1), kLine, origin).feasible);
  EXPECT_TRUE(age_constrained(vec({1, 1}), 0.0, scalar(1), kLine, Interval1D{-1, 5}).feasible);
}

TEST(AgeConstrained, BeatsGlobalOnSubsets) {
  // 1 + e^{2x} - 2.5 e^x is negative near 0 but nonnegative on [1, inf).
  const AgeCertificate cert = age_constrained(vec({1, 1}), -2.5, scalar(1), kLine, Interval1D{1, kInf});
  EXPECT_TRUE(cert.feasible);
  EXPECT_FALSE(age_global(vec({1, 1}), -2.5, scalar(1), kLine).feasible);
}

TEST(AgeConstrained, NegativeCoefficientIsAnInputError) {
  EXPECT_THROW(age_constrained(vec({1, -1}), -1, scalar(1), kLine, FullSpace{1}), InputError);
}

TEST(AgeConstrained, RegionMonotonicityProperty) {
  Gen gen(79);
  for (int trial = 0; trial < 60; ++trial) {
    const double a = gen.uniform(-2, 1), b = a + gen.uniform(0.2, 2);
    const double a1 = gen.uniform(a, b), b1 = gen.uniform(a1, b);
    const Vector c = gen.vector(2, 0.2, 2);
    const double d = -gen.uniform(0, 4);
    const ConvexRegion big = VertexPolytope{{scalar(a), scalar(b)}, {}};
    const ConvexRegion small = VertexPolytope{{scalar(a1), scalar(b1)}, {}};
    const AgeCertificate on_big = age_constrained(c, d, scalar(1), kLine, big);
    if (!on_big.feasible) continue;
    const double g_small = entropy_sigma_objective(c, scalar(1), kLine, small, on_big.nu);
    EXPECT_LE(g_small, on_big.support_value + on_big.entropy_value + 1e-12);
    EXPECT_TRUE(age_constrained(c, d, scalar(1), kLine, small).feasible);
  }
}

TEST(SageMembership, TwoCircuitShifted) {
  const Signomial f = two_circuit(7);
  const SupportPartition part = partition_support(f);
  const SageResult r = sage_membership(f, part, FullSpace{2});
  ASSERT_TRUE(r.found);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(verify_certificate(*r.certificate, f, FullSpace{2}).pass);
  ASSERT_EQ(r.certificate->parts.size(), 2u);
  Vector total = Vector::Zero(3);
  for (const auto& p : r.certificate->parts) total += p.c;
  EXPECT_NEAR((total - part.c).norm(), 0.0, 1e-7);
}

TEST(SageMembership, TwoCircuitShiftedKelleyOnly) {
  const Signomial f = two_circuit(7);
  SageOptions opt;
  opt.try_decomposition = false;
  const SageResult r = sage_membership(f, partition_support(f), FullSpace{2}, SageMode::SignedNonnegC, opt);
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(verify_certificate(*r.certificate, f, FullSpace{2}).pass);
}

TEST(SageMembership, TwoCircuitBelowThresholdFails) {
  const Signomial f = two_circuit(6.9);
  const SageResult r = sage_membership(f, partition_support(f), FullSpace{2});
  EXPECT_FALSE(r.found);
  EXPECT_TRUE(r.proven_nonmember);
  EXPECT_LT(r.slack_upper_bound, 0.0);
}

TEST(SageMembership, TwoCircuitOnTriangle) {
  const Signomial f = two_circuit();
  const ConvexRegion X = VertexPolytope{triangle(), {}};
  const SageResult r = sage_membership(f, partition_support(f), X);
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(verify_certificate(*r.certificate, f, X).pass);
}

TEST(SageMembership, SquaredProductNotFound) {
  const Problem p = load_problem("squared_product.json");
  const ConvexRegion orthant = VertexPolytope{{vec({0, 0})}, {vec({1, 0}), vec({0, 1})}};
  const SageResult r = sage_membership(p.f, p.partition(), orthant);
  EXPECT_FALSE(r.found);
  EXPECT_FALSE(r.certificate.has_value());
}

TEST(SageMembership, SingleBetaMatchesAge) {
  const Signomial f(1, {{1.0, scalar(0)}, {1.0, scalar(2)}, {-2.5, scalar(1)}});
  for (const ConvexRegion& X : {ConvexRegion{Interval1D{1, kInf}}, ConvexRegion{FullSpace{1}},
                                ConvexRegion{Interval1D{-0.3, 0.3}}}) {
    const SageResult r = sage_membership(f, partition_support(f), X);
    EXPECT_EQ(r.found, age_constrained(vec({1, 1}), -2.5, scalar(1), kLine, X).feasible);
  }
}

TEST(SageMembership, FreeSignUsesDecomposition) {
  const Signomial f = two_circuit(7);
  const SageResult r = sage_membership(f, partition_support(f), FullSpace{2}, SageMode::FreeC);
  ASSERT_TRUE(r.found);
  ASSERT_TRUE(r.decomposition.has_value());
}

TEST(VerifyCertificate, TamperingDetected) {
  const Signomial f = two_circuit(7);
  const SageResult r = sage_membership(f, partition_support(f), FullSpace{2});
  ASSERT_TRUE(r.found);
  SageCertificate bad = *r.certificate;
  bad.parts[0].nu[0] += 1.0;
  EXPECT_FALSE(verify_certificate(bad, f, FullSpace{2}).pass);
  SageCertificate split = *r.certificate;
  split.parts[0].c[0] += 0.5;
  EXPECT_FALSE(verify_certificate(split, f, FullSpace{2}).pass);
}

TEST(VerifyCertificate, EmptyNegativeSupport) {
  const Signomial f = Signomial::constant(1, 1.0);
  const SageResult r = sage_membership(f, partition_support(f), FullSpace{1});
  ASSERT_TRUE(r.found);
  EXPECT_TRUE(verify_certificate(*r.certificate, f, FullSpace{1}).pass);
}

TEST(SageMembership, SoundnessOverFixtureCorpus) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"two_circuit_shifted.json", "region_fullspace2.json"},  {"two_circuit.json", "region_triangle.json"},
      {"two_circuit_shifted_7_01.json", "region_fullspace2.json"}, {"two_circuit_shifted_7_1.json", "region_triangle.json"},
      {"two_circuit_single_circuit.json", "region_fullspace2.json"}, {"squared_product.json", "region_box_0_2_0_1.json"},
      {"squared_product.json", "region_orthant2.json"},            {"perfect_square.json", "region_real_line.json"},
      {"endpoint_shares.json", "region_halfline.json"},  {"posynomial.json", "region_fullspace2.json"},
      {"cubic_c2_m4_5.json", "region_interval_0_2.json"}, {"quartic_square_g.json", "region_real_line.json"},
      {"two_circuit.json", "region_box_0_2.json"}};
  int certified = 0;
  for (const auto& [pf, rf] : cases) {
    const Problem p = load_problem(pf);
    const ConvexRegion X = *load_region(rf).x_region;
    if (p.f.dimension() != region_dimension(X)) continue;
    SageResult r;
    try {
      r = sage_membership(p.f, p.partition(), X);
    } catch (const Error&) {
      continue;
    }
    if (!r.found) continue;
    ++certified;
    for (const auto& x : check_points(X, 5000)) {
      EXPECT_GE(p.f(x), -1e-6 * std::max(1.0, std::exp(x.cwiseAbs().maxCoeff()))) << pf << " " << rf;
    }
  }
  EXPECT_GE(certified, 3);
}
