#pragma once

// Finite-dimensional Grassmannian geometry under the l1, l2 and linf norms.
//
// The metric is the Hausdorff distance between the intersections of two
// subspaces with the closed unit ball. For l2 it has the closed form
// max(|(I - P_W) Q_Y|, |(I - P_Y) Q_W|). For the polyhedral norms the inner
// distance d(y, W cap B) is a small linear program and the outer supremum
// of that convex function over the polytope Y cap B is attained at a
// vertex, so it is computed by enumerating vertices.

#include "oseledets/norms.hpp"

#include <Eigen/Dense>

#include <initializer_list>
#include <vector>

namespace oseledets {

/// Numerical cutoffs standing in for exact algebra.
struct GrassmannTolerances {
  double rank = 1e-10;       ///< smallest admissible singular value of a column-normalized basis
  double condition = 1e12;   ///< largest admissible condition number for complementarity
  double nesting = 1e-8;     ///< one-sided sup allowed for V_{j+1} inside V_j
};

/// Process-wide defaults; override before starting concurrent work.
GrassmannTolerances& grassmann_tolerances();

class Subspace {
 public:
  /// Columns of `basis` span the subspace. Throws RankError when they are
  /// numerically dependent.
  explicit Subspace(Eigen::MatrixXd basis, NormTag norm = NormTag::l2);

  static Subspace zero(Eigen::Index ambient_dim, NormTag norm = NormTag::l2);
  static Subspace whole(Eigen::Index ambient_dim, NormTag norm = NormTag::l2);
  static Subspace span(std::initializer_list<Eigen::VectorXd> vectors, NormTag norm = NormTag::l2);

  Eigen::Index ambient_dim() const noexcept { return basis_.rows(); }
  Eigen::Index dim() const noexcept { return basis_.cols(); }
  NormTag norm() const noexcept { return norm_; }
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  /// l2-orthonormal basis of the same span.
  const Eigen::MatrixXd& orthonormal() const noexcept { return orthonormal_; }

  Subspace with_norm(NormTag norm) const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd orthonormal_;
  NormTag norm_;
};

/// Orthonormal basis of the column span, rank-checked.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& columns);

/// min_{w in W} |x - w| in W's norm; optionally returns the minimizer.
double distance_point_subspace(const Eigen::VectorXd& x, const Subspace& w,
                               Eigen::VectorXd* nearest = nullptr);

/// d(x, W cap B) with B the closed unit ball.
double distance_point_ball_section(const Eigen::VectorXd& x, const Subspace& w);

/// sup_{y in Y cap B} d(y, W cap B).
double one_sided_distance(const Subspace& y, const Subspace& w);

/// Hausdorff distance between unit-ball sections. Throws ParameterError on
/// ambient-dimension or norm mismatch.
double grassmann_distance(const Subspace& y, const Subspace& yp);

/// sin of the largest principal angle; for equal-dimensional l2 subspaces
/// this equals grassmann_distance and serves as an independent check.
double principal_angle_distance(const Subspace& y, const Subspace& yp);

/// Vertices of the polytope Y cap B (l1 and linf only).
std::vector<Eigen::VectorXd> unit_ball_section_vertices(const Subspace& y);

/// Nice basis built column by column: y_{m+1} is the normalized residual of
/// the next input column after its best approximation from span(y_1..y_m).
Eigen::MatrixXd nice_basis(const Subspace& y);

/// Columns y_i satisfy 1-eps < |y_i| < 1+eps and d(y_i, span(y_<i)) > 1-eps.
bool is_eps_nice(const Eigen::MatrixXd& vectors, double eps, NormTag norm);

/// eps < 2^{-k-2}, the regime in which the coordinate and closeness bounds hold.
bool nice_eps_admissible(double eps, Eigen::Index k) noexcept;

struct ProjectionPair {
  Subspace range;
  Subspace kernel;
  Eigen::MatrixXd matrix;  ///< projection onto range along kernel
};

/// Requires dim(Y) + dim(Z) = d. Throws ComplementarityError when Y cap Z != {0}.
ProjectionPair projection(const Subspace& y, const Subspace& z);

/// Projection onto `range` along `kernel`, defined on range (+) kernel and
/// extended by zero on its l2-orthogonal complement. Dimensions need not fill
/// the ambient space.
Eigen::MatrixXd partial_projection(const Subspace& range, const Subspace& kernel);

/// Span of the union of bases. Throws ComplementarityError if they overlap.
Subspace direct_sum(const Subspace& a, const Subspace& b);
Subspace direct_sum(const std::vector<Subspace>& parts, Eigen::Index ambient_dim, NormTag norm);

/// The `dim`-dimensional part of A closest to lying inside B (exact
/// intersection when dim(A cap B) = dim).
Subspace intersect(const Subspace& a, const Subspace& b, Eigen::Index dim);

struct GoodComplementOptions {
  double eps = 1e-8;
};

struct GoodComplement {
  /// U_j for every level with positive codimension, in filtration order.
  std::vector<Subspace> complements;
  /// Level index j (0-based) each complement belongs to.
  std::vector<std::size_t> levels;
  /// d(u_l, W_l) for every selected direction, level-major.
  std::vector<double> step_distances;
  /// |Pi_{U_j || V_{j+1} (+) U_<j}| per complement.
  std::vector<double> complement_projection_norms;
  /// |Pi_{V_{j+1} || U_j (+) U_<j}| per complement.
  std::vector<double> remainder_projection_norms;
  /// Every step_distance exceeds 1 - eps.
  bool nice = true;
};

/// Good complements for a nested sequence V_1 > V_2 > ... > V_{l+1}.
/// Levels with codimension 0 contribute nothing. Throws FiltrationError when
/// some V_{j+1} is not contained in V_j.
GoodComplement good_complement(const std::vector<Subspace>& filtration,
                               const GoodComplementOptions& options = {});

}  // namespace oseledets
