#pragma once

#include <Eigen/Core>

namespace inspectra {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;            ///< primal solution of the standard-form problem
  Eigen::VectorXd multipliers;  ///< simplex multipliers y = c_B^T B^{-1}, one per row
  double objective = 0.0;
  int pivots = 0;
};

/// Dense two-phase tableau simplex for
///   minimize c^T x  subject to  A x = b,  x >= 0.
/// Entering and leaving variables follow Bland's lowest-index rule, so the
/// method cannot cycle and its output is deterministic. Intended for small
/// row counts; the tableau is (rows + 1) x (cols + rows + 1).
///
/// At an optimum the multipliers solve the dual  max b^T y  s.t.  A^T y <= c.
LpSolution solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& c, double eps = 1e-11);

}  // namespace inspectra
