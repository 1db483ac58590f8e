#include "inspectra/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "inspectra/error.hpp"

namespace inspectra {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double eps)
      : m_(static_cast<int>(A.rows())),
        n_(static_cast<int>(A.cols())),
        eps_(eps),
        t_(RowMatrix::Zero(m_ + 1, n_ + m_ + 1)),
        basis_(m_),
        active_(m_, true) {
    for (int i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  int rhs() const { return n_ + m_; }

  // Reduced-cost row for cost vector `cost` over all n_ + m_ columns.
  void load_costs(const Eigen::VectorXd& cost) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  // Runs Bland's rule pivots; columns >= `enter_limit` may not enter.
  LpStatus iterate(int enter_limit, int& pivots) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j) {
        if (t_(m_, j) < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (!active_[i]) continue;
        const double a = t_(i, enter);
        if (a <= eps_) continue;
        const double ratio = t_(i, rhs()) / a;
        if (leave < 0) {
          best = ratio;
          leave = i;
          continue;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(best));
        if (ratio < best - slack) {
          best = ratio;
          leave = i;
        } else if (std::abs(ratio - best) <= slack && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // After phase 1: pivot basic artificials out, or retire redundant rows.
  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      double best = eps_;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        active_[i] = false;
      }
    }
  }

  double objective() const { return -t_(m_, rhs()); }
  double reduced_cost(int j) const { return t_(m_, j); }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = t_(i, rhs());
    }
    return x;
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_;
  int n_;
  double eps_;
  RowMatrix t_;
  std::vector<int> basis_;
  std::vector<bool> active_;
};

}  // namespace

LpSolution solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c, double eps) {
  if (A.rows() != b.size() || A.cols() != c.size()) {
    throw InvalidArgument("LP dimensions do not match");
  }
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpSolution sol;
  Tableau tab(A, b, eps);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.load_costs(phase1);
  tab.iterate(n, sol.pivots);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (tab.objective() > 1e-9 * scale) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  tab.expel_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  tab.load_costs(phase2);
  sol.status = tab.iterate(n, sol.pivots);
  if (sol.status != LpStatus::optimal) return sol;

  sol.x = tab.primal();
  sol.objective = c.dot(sol.x);
  // Artificial columns carry B^{-1} of the sign-normalized rows; undo the sign.
  sol.multipliers.resize(m);
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    sol.multipliers[i] = -sign * tab.reduced_cost(n + i);
  }
  return sol;
}

}  // namespace inspectra
