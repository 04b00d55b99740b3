#include "sagesimplex/core.hpp"

#include <cmath>
#include <sstream>

namespace sagesimplex {

bool same_exponent(const Vector& a, const Vector& b, double tol) {
  if (a.size() != b.size()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol || a.size() == 0;
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ")";
  return os.str();
}

Signomial::Signomial(int dimension, std::vector<Term> terms) : dimension_(dimension) {
  if (dimension <= 0) throw InputError("signomial dimension must be positive");
  for (auto& t : terms) {
    if (t.exponent.size() != dimension) {
      throw InputError("exponent " + format_vector(t.exponent) + " has length " +
                       std::to_string(t.exponent.size()) + ", expected " +
                       std::to_string(dimension));
    }
    if (!std::isfinite(t.coefficient) || !t.exponent.allFinite()) {
      throw InputError("non-finite coefficient or exponent");
    }
    bool merged = false;
    for (auto& existing : terms_) {
      if (same_exponent(existing.exponent, t.exponent)) {
        existing.coefficient += t.coefficient;
        merged = true;
        break;
      }
    }
    if (!merged) terms_.push_back(std::move(t));
  }
  std::erase_if(terms_, [](const Term& t) { return std::abs(t.coefficient) < kZeroCoefficient; });
}

Signomial Signomial::constant(int dimension, double value) {
  return Signomial(dimension, {Term{value, Vector::Zero(dimension)}});
}

double Signomial::operator()(const Vector& x) const {
  if (x.size() != dimension_) {
    throw InputError("point has dimension " + std::to_string(x.size()) + ", signomial has " +
                     std::to_string(dimension_));
  }
  double s = 0.0;
  for (const auto& t : terms_) s += t.coefficient * std::exp(t.exponent.dot(x));
  return s;
}

Vector Signomial::gradient(const Vector& x) const {
  if (x.size() != dimension_) throw InputError("gradient: dimension mismatch");
  Vector g = Vector::Zero(dimension_);
  for (const auto& t : terms_) g += t.coefficient * std::exp(t.exponent.dot(x)) * t.exponent;
  return g;
}

double Signomial::coefficient(const Vector& alpha) const {
  for (const auto& t : terms_) {
    if (same_exponent(t.exponent, alpha)) return t.coefficient;
  }
  return 0.0;
}

Signomial Signomial::operator+(const Signomial& other) const {
  if (other.dimension_ != dimension_) throw InputError("adding signomials of different dimension");
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Signomial(dimension_, std::move(all));
}

Signomial Signomial::operator-(const Signomial& other) const { return *this + other * -1.0; }

Signomial Signomial::operator*(double s) const {
  std::vector<Term> scaled = terms_;
  for (auto& t : scaled) t.coefficient *= s;
  return Signomial(dimension_, std::move(scaled));
}

Signomial Signomial::plus_term(double value, const Vector& alpha) const {
  std::vector<Term> all = terms_;
  all.push_back(Term{value, alpha});
  return Signomial(dimension_, std::move(all));
}

double evaluate(const Signomial& f, const Vector& x) { return f(x); }

int affine_rank(const std::vector<Vector>& points) {
  if (points.size() <= 1) return 0;
  const auto n = points.front().size();
  Matrix D(n, static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i) D.col(i - 1) = points[i] - points.front();
  Eigen::ColPivHouseholderQR<Matrix> qr(D);
  qr.setThreshold(kRankThreshold);
  return static_cast<int>(qr.rank());
}

bool affinely_independent(const std::vector<Vector>& points) {
  if (points.empty()) return false;
  return affine_rank(points) == static_cast<int>(points.size()) - 1;
}

Barycentric barycentric(const std::vector<Vector>& A, const Vector& beta) {
  if (A.empty()) throw StructureError("barycentric coordinates need a nonempty A");
  const auto n = beta.size();
  const auto m = static_cast<Eigen::Index>(A.size());
  Matrix M(n + 1, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (A[j].size() != n) throw InputError("barycentric: dimension mismatch");
    M.block(0, j, n, 1) = A[j];
    M(n, j) = 1.0;
  }
  Vector rhs(n + 1);
  rhs.head(n) = beta;
  rhs[n] = 1.0;

  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < m) throw StructureError("barycentric: A is not affinely independent");

  Barycentric out;
  out.lambda = qr.solve(rhs);
  out.residual = (M * out.lambda - rhs).cwiseAbs().maxCoeff();
  if (!(out.residual <= kBaryTol)) {
    throw StructureError("exponent " + format_vector(beta) + " is outside the affine hull of A");
  }
  out.in_hull = true;
  for (Eigen::Index j = 0; j < m; ++j) {
    double& l = out.lambda[j];
    if (l < -kBaryTol || l > 1.0 + kBaryTol) {
      out.in_hull = false;
    } else if (l < 0.0) {
      l = 0.0;
      out.clamped = true;
    } else if (l > 1.0) {
      l = 1.0;
      out.clamped = true;
    }
  }
  return out;
}

Signomial SupportPartition::assemble() const {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < positive.size(); ++i) terms.push_back({c[i], positive[i]});
  for (std::size_t j = 0; j < negative.size(); ++j) terms.push_back({d[j], negative[j]});
  return Signomial(dimension, std::move(terms));
}

SupportPartition partition_support(const Signomial& f,
                                   const std::optional<std::vector<Vector>>& declared_A) {
  SupportPartition part;
  part.dimension = f.dimension();
  std::vector<double> cs, ds;

  if (declared_A) {
    for (const auto& a : *declared_A) {
      if (a.size() != f.dimension()) throw InputError("declared A: dimension mismatch");
      for (const auto& b : part.positive) {
        if (same_exponent(a, b)) throw InputError("declared A contains a duplicate exponent");
      }
      part.positive.push_back(a);
      cs.push_back(f.coefficient(a));
    }
    for (const auto& t : f.terms()) {
      bool in_A = false;
      for (const auto& a : part.positive) in_A = in_A || same_exponent(a, t.exponent);
      if (in_A) continue;
      if (t.coefficient > 0.0) {
        throw StructureError("positive term at " + format_vector(t.exponent) +
                             " lies outside the declared positive support");
      }
      part.negative.push_back(t.exponent);
      ds.push_back(t.coefficient);
    }
  } else {
    for (const auto& t : f.terms()) {
      if (t.coefficient > 0.0) {
        part.positive.push_back(t.exponent);
        cs.push_back(t.coefficient);
      } else {
        part.negative.push_back(t.exponent);
        ds.push_back(t.coefficient);
      }
    }
  }

  part.c = Eigen::Map<Vector>(cs.data(), static_cast<Eigen::Index>(cs.size()));
  part.d = Eigen::Map<Vector>(ds.data(), static_cast<Eigen::Index>(ds.size()));

  if (part.negative.empty()) return part;
  if (part.positive.empty()) throw StructureError("negative terms without any positive support");
  if (!affinely_independent(part.positive)) {
    throw StructureError("positive support A is not affinely independent");
  }
  for (const auto& beta : part.negative) part.barycentric.push_back(barycentric(part.positive, beta));
  return part;
}

SimplexDiagnostics validate_simplex_problem(const SupportPartition& part) {
  SimplexDiagnostics diag;
  diag.affinely_independent = !part.positive.empty() && affinely_independent(part.positive);
  if (!diag.affinely_independent) {
    diag.reasons.push_back(part.positive.empty() ? "positive support A is empty"
                                                 : "A is not affinely independent");
  }
  for (std::size_t j = 0; j < part.negative.size(); ++j) {
    BetaDiagnostic b;
    b.beta = part.negative[j];
    if (j < part.barycentric.size()) {
      b.lambda = part.barycentric[j].lambda;
      b.in_hull = part.barycentric[j].in_hull;
    }
    for (const auto& a : part.positive) b.not_in_A = b.not_in_A && !same_exponent(a, b.beta);
    if (!b.in_hull) {
      diag.reasons.push_back("beta " + format_vector(b.beta) + " lies outside conv(A)" +
                             (b.lambda.size() ? ", lambda = " + format_vector(b.lambda) : ""));
    }
    if (!b.not_in_A) diag.reasons.push_back("beta " + format_vector(b.beta) + " is a point of A");
    if (!(part.d[static_cast<Eigen::Index>(j)] < 0.0)) {
      diag.reasons.push_back("coefficient at beta " + format_vector(b.beta) + " is not negative");
    }
    diag.betas.push_back(std::move(b));
  }
  diag.eligible = diag.reasons.empty();
  return diag;
}

Signomial poly_to_signomial(int dimension, const std::vector<PolynomialTerm>& p) {
  std::vector<Term> terms;
  for (const auto& t : p) {
    if (static_cast<int>(t.exponent.size()) != dimension) {
      throw InputError("polynomial exponent has the wrong length");
    }
    Vector a(dimension);
    for (int i = 0; i < dimension; ++i) {
      const double e = t.exponent[i];
      if (!(e >= 0.0) || std::floor(e) != e) {
        throw InputError("polynomial exponents must be nonnegative integers, got " +
                         std::to_string(e));
      }
      a[i] = e;
    }
    terms.push_back({t.coefficient, a});
  }
  return Signomial(dimension, std::move(terms));
}

}  // namespace sagesimplex
