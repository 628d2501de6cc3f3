#pragma once

// Dense two-phase simplex for the small linear programs behind distances in
// the polyhedral norms (l1, linf). Problem sizes are tens of variables.

#include <Eigen/Dense>

namespace oseledets::detail {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// minimize cost.x  subject to  a.x <= b,  x >= 0.
/// `b` may have negative entries. Bland's rule prevents cycling.
LpResult solve_lp(const Eigen::VectorXd& cost, const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// min ||x - basis*c|| over coefficients c, in l1 or linf. With
/// `ball_constraint` the search is restricted to ||basis*c|| <= 1.
/// Returns the minimizer of the combination basis*c in `point`.
double polyhedral_distance(const Eigen::VectorXd& x, const Eigen::MatrixXd& basis, bool l1,
                           bool ball_constraint, Eigen::VectorXd* point = nullptr);

}  // namespace oseledets::detail
