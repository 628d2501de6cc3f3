#include "oseledets/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace oseledets::detail {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  Eigen::MatrixXd t;  // m rows, last column is the right-hand side
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows(); }
  Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = c;
  }
};

// Minimizes cost over the current basic feasible tableau. Columns with
// allowed[j] == false never enter. Returns false when unbounded.
bool run_simplex(Tableau& tab, const Eigen::VectorXd& cost, const std::vector<bool>& allowed) {
  const Eigen::Index m = tab.rows();
  const Eigen::Index n = tab.cols();
  for (int iter = 0; iter < 50000; ++iter) {
    Eigen::RowVectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb[i] = cost[tab.basis[static_cast<std::size_t>(i)]];
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      const double reduced = cost[j] - cb.dot(tab.t.col(j));
      if (reduced < -kPivotTol) {
        enter = j;  // Bland: first improving column
        break;
      }
    }
    if (enter < 0) return true;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double coef = tab.t(i, enter);
      if (coef > kPivotTol) {
        const double ratio = tab.t(i, n) / coef;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    tab.pivot(leave, enter);
  }
  return true;
}

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& cost, const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  const Eigen::Index m = a.rows();
  Eigen::Index n_art = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (b[i] < 0.0) ++n_art;
  const Eigen::Index total = n + m + n_art;

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m, total + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  Eigen::Index art = n + m;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * a.row(i);
    tab.t(i, n + i) = sign;
    tab.t(i, total) = sign * b[i];
    if (b[i] < 0.0) {
      tab.t(i, art) = 1.0;
      tab.basis[static_cast<std::size_t>(i)] = art++;
    } else {
      tab.basis[static_cast<std::size_t>(i)] = n + i;
    }
  }

  LpResult result;
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    phase1.tail(n_art).setOnes();
    run_simplex(tab, phase1, allowed);
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (tab.basis[static_cast<std::size_t>(i)] >= n + m) infeasibility += tab.t(i, total);
    if (infeasibility > 1e-9) return result;
    // Drive remaining zero-level artificials out of the basis.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < n + m) continue;
      for (Eigen::Index j = 0; j < n + m; ++j) {
        if (std::abs(tab.t(i, j)) > kPivotTol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (Eigen::Index j = n + m; j < total; ++j) allowed[static_cast<std::size_t>(j)] = false;
  }

  Eigen::VectorXd full_cost = Eigen::VectorXd::Zero(total);
  full_cost.head(n) = cost;
  if (!run_simplex(tab, full_cost, allowed)) {
    result.status = LpResult::Status::unbounded;
    return result;
  }
  result.status = LpResult::Status::optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis[static_cast<std::size_t>(i)];
    if (j < n) result.x[j] = tab.t(i, total);
  }
  result.value = cost.dot(result.x);
  return result;
}

double polyhedral_distance(const Eigen::VectorXd& x, const Eigen::MatrixXd& basis, bool l1, bool ball_constraint,
                           Eigen::VectorXd* point) {
  const Eigen::Index d = x.size();
  const Eigen::Index k = basis.cols();
  auto norm = [&](const Eigen::VectorXd& v) { return l1 ? v.lpNorm<1>() : v.lpNorm<Eigen::Infinity>(); };
  if (k == 0) {
    if (point) *point = Eigen::VectorXd::Zero(d);
    return norm(x);
  }

  // Variables: c+ (k), c- (k), then auxiliaries.
  const Eigen::Index n_aux = l1 ? (ball_constraint ? 2 * d : d) : 1;
  const Eigen::Index n = 2 * k + n_aux;
  Eigen::Index rows = 2 * d;
  if (ball_constraint) rows += l1 ? 2 * d + 1 : 2 * d;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n);

  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    // |x_i - (Qc)_i| <= aux
    const Eigen::Index aux = l1 ? 2 * k + i : 2 * k;
    a.row(r).segment(0, k) = basis.row(i);
    a.row(r).segment(k, k) = -basis.row(i);
    a(r, aux) = -1.0;
    b[r++] = x[i];
    a.row(r).segment(0, k) = -basis.row(i);
    a.row(r).segment(k, k) = basis.row(i);
    a(r, aux) = -1.0;
    b[r++] = -x[i];
  }
  if (l1)
    cost.segment(2 * k, d).setOnes();
  else
    cost[2 * k] = 1.0;

  if (ball_constraint) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (l1) {
        const Eigen::Index aux = 2 * k + d + i;
        a.row(r).segment(0, k) = basis.row(i);
        a.row(r).segment(k, k) = -basis.row(i);
        a(r, aux) = -1.0;
        b[r++] = 0.0;
        a.row(r).segment(0, k) = -basis.row(i);
        a.row(r).segment(k, k) = basis.row(i);
        a(r, aux) = -1.0;
        b[r++] = 0.0;
      } else {
        a.row(r).segment(0, k) = basis.row(i);
        a.row(r).segment(k, k) = -basis.row(i);
        b[r++] = 1.0;
        a.row(r).segment(0, k) = -basis.row(i);
        a.row(r).segment(k, k) = basis.row(i);
        b[r++] = 1.0;
      }
    }
    if (l1) {
      a.row(r).segment(2 * k + d, d).setOnes();
      b[r++] = 1.0;
    }
  }

  const LpResult lp = solve_lp(cost, a, b);
  Eigen::VectorXd c = lp.status == LpResult::Status::optimal
                          ? Eigen::VectorXd(lp.x.segment(0, k) - lp.x.segment(k, k))
                          : Eigen::VectorXd::Zero(k);
  Eigen::VectorXd w = basis * c;
  if (ball_constraint) {
    const double nw = norm(w);
    if (nw > 1.0) w /= nw;
  }
  if (point) *point = w;
  return norm(Eigen::VectorXd(x - w));
}

}  // namespace oseledets::detail
