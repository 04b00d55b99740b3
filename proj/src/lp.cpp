#include "sagesimplex/lp.hpp"

#include <cmath>
#include <vector>

namespace sagesimplex::lp {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau with the objective row last. Columns: variables then rhs.
struct Tableau {
  Matrix T;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return T.rows() - 1; }
  Eigen::Index cols() const { return T.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index col) {
    T.row(r) /= T(r, col);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    }
    basis[r] = col;
  }

  // Minimizes the objective row over columns [0, usable). Returns false when unbounded.
  Status run(Eigen::Index usable, int& budget) {
    const Eigen::Index obj = rows();
    while (budget-- > 0) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < usable; ++j) {
        if (T(obj, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < obj; ++i) {
        if (T(i, enter) > kPivotTol) {
          const double ratio = T(i, cols()) / T(i, enter);
          if (leave < 0 || ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
    }
    return Status::IterationLimit;
  }
};

}  // namespace

Result solve_standard(const Matrix& A, const Vector& b, const Vector& c, int max_pivots) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  Result out;
  out.x = Vector::Zero(n);

  // Phase one: artificial variable per row, rows sign-normalized so b >= 0.
  Tableau tab;
  tab.T = Matrix::Zero(m + 1, n + m + 1);
  tab.basis.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b[i] < 0.0 ? -1.0 : 1.0;
    tab.T.block(i, 0, 1, n) = s * A.row(i);
    tab.T(i, n + i) = 1.0;
    tab.T(i, n + m) = s * b[i];
    tab.basis[i] = n + i;
  }
  for (Eigen::Index i = 0; i < m; ++i) tab.T.row(m) -= tab.T.row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.T(m, n + i) = 0.0;

  int budget = max_pivots;
  Status st = tab.run(n + m, budget);
  if (st == Status::IterationLimit) return out;
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.T(m, n + m) > 1e-9 * scale) {
    out.status = Status::Infeasible;
    return out;
  }
  // Drive artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.T(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase two on the original objective, artificial columns barred.
  tab.T.row(m).setZero();
  tab.T.block(m, 0, 1, n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis[i];
    if (j < n && tab.T(m, j) != 0.0) tab.T.row(m) -= tab.T(m, j) * tab.T.row(i);
  }
  st = tab.run(n, budget);
  out.status = st;
  if (st != Status::Optimal) return out;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[i] < n) out.x[tab.basis[i]] = tab.T(i, n + m);
  }
  out.value = c.dot(out.x);
  return out;
}

Result solve_inequality(const Matrix& A, const Vector& b, const Vector& c, int max_pivots) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  Matrix S(m, n + m);
  S << A, Matrix::Identity(m, m);
  Vector cs = Vector::Zero(n + m);
  cs.head(n) = c;
  Result r = solve_standard(S, b, cs, max_pivots);
  if (r.x.size() == n + m) r.x = r.x.head(n).eval();
  return r;
}

}  // namespace sagesimplex::lp
