#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sagesimplex/core.hpp"
#include "sagesimplex/io.hpp"

namespace testing_helpers {

using sagesimplex::Signomial;
using sagesimplex::Term;
using sagesimplex::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vector scalar(double x) { return Vector::Constant(1, x); }

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline sagesimplex::Problem load_problem(const std::string& name) {
  return sagesimplex::problem_from_json(sagesimplex::read_json_file(fixture(name)));
}

inline sagesimplex::RegionSpec load_region(const std::string& name) {
  return sagesimplex::region_from_json(sagesimplex::read_json_file(fixture(name)));
}

/// 13 + e^(4,2) + e^(2,4) - 12 e^(1,1) - 3 e^(2,2) plus `shift` on the constant.
inline Signomial two_circuit(double shift = 0.0) {
  return Signomial(2, {{13.0 + shift, vec({0, 0})},
                       {1.0, vec({4, 2})},
                       {1.0, vec({2, 4})},
                       {-12.0, vec({1, 1})},
                       {-3.0, vec({2, 2})}});
}

inline std::vector<Vector> triangle() { return {vec({-1, 0}), vec({0, -1}), vec({0, 0})}; }

/// Seeded generator shared by the property suites.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  Vector vector(int n, double lo, double hi) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  /// A random point of the probability simplex with all entries positive.
  Vector simplex_point(int n) {
    Vector w(n);
    for (int i = 0; i < n; ++i) w[i] = -std::log(uniform(1e-3, 1.0));
    return w / w.sum();
  }
  /// n+1 affinely independent points in R^n (a perturbed scaled simplex).
  std::vector<Vector> simplex_vertices(int n) {
    std::vector<Vector> A{Vector::Zero(n)};
    for (int i = 0; i < n; ++i) {
      Vector a = vector(n, -0.3, 0.3);
      a[i] += uniform(1.0, 3.0);
      A.push_back(a);
    }
    return A;
  }
};

}  // namespace testing_helpers
