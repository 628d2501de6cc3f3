#include "oseledets/grassmann.hpp"

#include "oseledets/errors.hpp"
#include "oseledets/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oseledets {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(NormTag tag) noexcept {
  switch (tag) {
    case NormTag::l1:
      return "l1";
    case NormTag::linf:
      return "linf";
    case NormTag::l2:
    default:
      return "l2";
  }
}

NormTag norm_from_string(std::string_view name) {
  if (name == "l1") return NormTag::l1;
  if (name == "l2") return NormTag::l2;
  if (name == "linf") return NormTag::linf;
  throw ParameterError("unknown norm '" + std::string(name) + "' (expected l1, l2 or linf)");
}

GrassmannTolerances& grassmann_tolerances() {
  static GrassmannTolerances tolerances;
  return tolerances;
}

namespace {

constexpr Index kMaxVertexCandidates = 200000;

MatrixXd normalize_columns(const MatrixXd& m) {
  MatrixXd out = m;
  for (Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) out.col(j) /= n;
  }
  return out;
}

// Orthonormal basis of the numerical column span (singular values above
// `rel` times the largest), without a rank requirement.
MatrixXd span_basis(const MatrixXd& m, double rel = 1e-12) {
  if (m.cols() == 0) return MatrixXd(m.rows(), 0);
  Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s[r] > rel * std::max(s[0], 1e-300)) ++r;
  return svd.matrixU().leftCols(r);
}

double dist_to_span(const VectorXd& x, const MatrixXd& columns, NormTag norm, VectorXd* nearest) {
  if (norm == NormTag::l2) {
    const MatrixXd q = span_basis(columns);
    VectorXd w = q * (q.transpose() * x);
    if (nearest) *nearest = w;
    return (x - w).norm();
  }
  return detail::polyhedral_distance(x, span_basis(columns), norm == NormTag::l1, false, nearest);
}

void require_compatible(const Subspace& a, const Subspace& b, const char* what) {
  if (a.ambient_dim() != b.ambient_dim()) {
    std::ostringstream os;
    os << what << ": ambient dimensions differ (" << a.ambient_dim() << " vs " << b.ambient_dim() << ")";
    throw ParameterError(os.str());
  }
  if (a.norm() != b.norm()) throw ParameterError(std::string(what) + ": norm tags differ");
}

double condition_number(const MatrixXd& m) {
  Eigen::BDCSVD<MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

// Index subsets of {0..d-1} of size r, in lexicographic order.
template <class F>
void for_each_subset(Index d, Index r, F&& f) {
  std::vector<Index> idx(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(idx);
    Index i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

void add_unique(std::vector<VectorXd>& out, const VectorXd& v) {
  for (const auto& u : out)
    if ((u - v).lpNorm<Eigen::Infinity>() < 1e-9) return;
  out.push_back(v);
}

}  // namespace

MatrixXd orthonormalize(const MatrixXd& columns) {
  if (columns.cols() == 0) return MatrixXd(columns.rows(), 0);
  if (columns.cols() > columns.rows()) throw RankError("more basis vectors than the ambient dimension");
  const MatrixXd n = normalize_columns(columns);
  Eigen::BDCSVD<MatrixXd> svd(n, Eigen::ComputeThinU);
  const double smin = svd.singularValues()[svd.singularValues().size() - 1];
  if (!(smin > grassmann_tolerances().rank)) {
    std::ostringstream os;
    os << "basis is numerically rank deficient (smallest singular value " << smin << ")";
    throw RankError(os.str());
  }
  return svd.matrixU();
}

Subspace::Subspace(MatrixXd basis, NormTag norm)
    : basis_(std::move(basis)), orthonormal_(orthonormalize(basis_)), norm_(norm) {}

Subspace Subspace::zero(Index ambient_dim, NormTag norm) { return Subspace(MatrixXd(ambient_dim, 0), norm); }

Subspace Subspace::whole(Index ambient_dim, NormTag norm) {
  return Subspace(MatrixXd::Identity(ambient_dim, ambient_dim), norm);
}

Subspace Subspace::span(std::initializer_list<VectorXd> vectors, NormTag norm) {
  if (vectors.size() == 0) throw ParameterError("span of an empty list needs an ambient dimension");
  const Index d = vectors.begin()->size();
  MatrixXd b(d, static_cast<Index>(vectors.size()));
  Index j = 0;
  for (const auto& v : vectors) {
    if (v.size() != d) throw ParameterError("span: vectors of different lengths");
    b.col(j++) = v;
  }
  return Subspace(std::move(b), norm);
}

Subspace Subspace::with_norm(NormTag norm) const {
  Subspace s = *this;
  s.norm_ = norm;
  return s;
}

double distance_point_subspace(const VectorXd& x, const Subspace& w, VectorXd* nearest) {
  if (x.size() != w.ambient_dim()) throw ParameterError("distance_point_subspace: dimension mismatch");
  if (w.norm() == NormTag::l2) {
    const MatrixXd& q = w.orthonormal();
    VectorXd p = q * (q.transpose() * x);
    if (nearest) *nearest = p;
    return (x - p).norm();
  }
  return detail::polyhedral_distance(x, w.orthonormal(), w.norm() == NormTag::l1, false, nearest);
}

double distance_point_ball_section(const VectorXd& x, const Subspace& w) {
  if (x.size() != w.ambient_dim()) throw ParameterError("distance_point_ball_section: dimension mismatch");
  if (w.norm() == NormTag::l2) {
    const MatrixXd& q = w.orthonormal();
    VectorXd p = q * (q.transpose() * x);
    const double np = p.norm();
    if (np > 1.0) p /= np;
    return (x - p).norm();
  }
  return detail::polyhedral_distance(x, w.orthonormal(), w.norm() == NormTag::l1, true);
}

std::vector<VectorXd> unit_ball_section_vertices(const Subspace& y) {
  if (y.norm() == NormTag::l2) throw ParameterError("the l2 unit ball has no vertices");
  const MatrixXd& q = y.orthonormal();
  const Index d = q.rows();
  const Index k = q.cols();
  std::vector<VectorXd> out;
  if (k == 0) return out;

  if (y.norm() == NormTag::linf) {
    if (binomial(d, k) * std::ldexp(1.0, static_cast<int>(k)) > kMaxVertexCandidates)
      throw ParameterError("linf vertex enumeration too large for this dimension");
    for_each_subset(d, k, [&](const std::vector<Index>& rows) {
      MatrixXd qs(k, k);
      for (Index i = 0; i < k; ++i) qs.row(i) = q.row(rows[static_cast<std::size_t>(i)]);
      if (condition_number(qs) > 1e10) return;
      const Eigen::PartialPivLU<MatrixXd> lu(qs);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        VectorXd s(k);
        for (Index i = 0; i < k; ++i) s[i] = (mask >> i) & 1U ? -1.0 : 1.0;
        VectorXd x = q * lu.solve(s);
        const double nx = x.lpNorm<Eigen::Infinity>();
        if (nx <= 1.0 + 1e-9) add_unique(out, x / nx);
      }
    });
    return out;
  }

  // l1: a vertex x has a zero set Z whose rows Q_Z leave a one-dimensional
  // null space; some k-1 of those rows already have rank k-1.
  if (binomial(d, k - 1) > kMaxVertexCandidates)
    throw ParameterError("l1 vertex enumeration too large for this dimension");
  for_each_subset(d, k - 1, [&](const std::vector<Index>& rows) {
    MatrixXd qz(k - 1, k);
    for (Index i = 0; i + 1 < k; ++i) qz.row(i) = q.row(rows[static_cast<std::size_t>(i)]);
    VectorXd a;
    if (k == 1) {
      a = VectorXd::Ones(1);
    } else {
      Eigen::JacobiSVD<MatrixXd> svd(qz, Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      if (s[k - 2] < 1e-10 * std::max(1.0, s[0])) return;
      a = svd.matrixV().col(k - 1);
    }
    VectorXd x = q * a;
    x /= x.lpNorm<1>();
    add_unique(out, x);
    add_unique(out, -x);
  });
  return out;
}

double one_sided_distance(const Subspace& y, const Subspace& w) {
  require_compatible(y, w, "one_sided_distance");
  if (y.dim() == 0) return 0.0;
  if (w.dim() == 0) return 1.0;
  if (y.norm() == NormTag::l2) {
    const MatrixXd& qy = y.orthonormal();
    const MatrixXd& qw = w.orthonormal();
    const MatrixXd r = qy - qw * (qw.transpose() * qy);
    return operator_norm(r, NormTag::l2);
  }
  double best = 0.0;
  for (const auto& v : unit_ball_section_vertices(y)) best = std::max(best, distance_point_ball_section(v, w));
  return best;
}

double grassmann_distance(const Subspace& y, const Subspace& yp) {
  require_compatible(y, yp, "grassmann_distance");
  return std::max(one_sided_distance(y, yp), one_sided_distance(yp, y));
}

double principal_angle_distance(const Subspace& y, const Subspace& yp) {
  if (y.ambient_dim() != yp.ambient_dim()) throw ParameterError("principal_angle_distance: dimension mismatch");
  if (y.dim() != yp.dim()) return 1.0;
  if (y.dim() == 0) return 0.0;
  const MatrixXd c = y.orthonormal().transpose() * yp.orthonormal();
  Eigen::JacobiSVD<MatrixXd> svd(c);
  const double cmin = std::min(1.0, svd.singularValues()[svd.singularValues().size() - 1]);
  return std::sqrt(std::max(0.0, 1.0 - cmin * cmin));
}

MatrixXd nice_basis(const Subspace& y) {
  if (y.dim() == 0) throw ParameterError("nice_basis needs a subspace of dimension >= 1");
  const MatrixXd& b = y.basis();
  const double rank_tol = grassmann_tolerances().rank;
  MatrixXd out(y.ambient_dim(), y.dim());
  for (Index m = 0; m < y.dim(); ++m) {
    const VectorXd x = b.col(m);
    VectorXd w = VectorXd::Zero(x.size());
    if (m > 0) dist_to_span(x, out.leftCols(m), y.norm(), &w);
    const VectorXd r = x - w;
    const double nr = vector_norm(r, y.norm());
    if (!(nr > rank_tol * vector_norm(x, y.norm()))) throw RankError("nice_basis: input basis is rank deficient");
    out.col(m) = r / nr;
  }
  return out;
}

bool is_eps_nice(const MatrixXd& vectors, double eps, NormTag norm) {
  for (Index i = 0; i < vectors.cols(); ++i) {
    const VectorXd v = vectors.col(i);
    const double n = vector_norm(v, norm);
    if (!(n > 1.0 - eps && n < 1.0 + eps)) return false;
    if (i > 0 && !(dist_to_span(v, vectors.leftCols(i), norm, nullptr) > 1.0 - eps)) return false;
  }
  return true;
}

bool nice_eps_admissible(double eps, Index k) noexcept {
  return eps > 0.0 && eps < std::ldexp(1.0, -static_cast<int>(k) - 2);
}

ProjectionPair projection(const Subspace& y, const Subspace& z) {
  require_compatible(y, z, "projection");
  const Index d = y.ambient_dim();
  if (y.dim() + z.dim() != d) {
    std::ostringstream os;
    os << "projection: dimensions " << y.dim() << " + " << z.dim() << " do not add up to " << d;
    throw ParameterError(os.str());
  }
  MatrixXd m(d, d);
  m << y.orthonormal(), z.orthonormal();
  const double cond = condition_number(m);
  if (!(cond <= grassmann_tolerances().condition)) {
    std::ostringstream os;
    os << "subspaces are not complementary (condition number " << cond << ")";
    throw ComplementarityError(os.str());
  }
  // Pi = M diag(I_k, 0) M^{-1}, i.e. Q_Y times the first k rows of M^{-1}.
  const MatrixXd inv = m.fullPivLu().inverse();
  MatrixXd p = y.orthonormal() * inv.topRows(y.dim());
  return ProjectionPair{y, z, std::move(p)};
}

MatrixXd partial_projection(const Subspace& range, const Subspace& kernel) {
  require_compatible(range, kernel, "partial_projection");
  const Index d = range.ambient_dim();
  const Index s = range.dim() + kernel.dim();
  if (s > d) throw ComplementarityError("partial_projection: dimensions exceed the ambient space");
  if (range.dim() == 0) return MatrixXd::Zero(d, d);
  MatrixXd m(d, s);
  m << range.orthonormal(), kernel.orthonormal();
  const double cond = condition_number(m);
  if (!(cond <= grassmann_tolerances().condition)) {
    std::ostringstream os;
    os << "subspaces are not complementary (condition number " << cond << ")";
    throw ComplementarityError(os.str());
  }
  const MatrixXd pinv = m.completeOrthogonalDecomposition().pseudoInverse();
  return range.orthonormal() * pinv.topRows(range.dim());
}

Subspace direct_sum(const Subspace& a, const Subspace& b) {
  require_compatible(a, b, "direct_sum");
  MatrixXd m(a.ambient_dim(), a.dim() + b.dim());
  m << a.basis(), b.basis();
  try {
    return Subspace(std::move(m), a.norm());
  } catch (const RankError&) {
    throw ComplementarityError("direct_sum: summands intersect nontrivially");
  }
}

Subspace direct_sum(const std::vector<Subspace>& parts, Index ambient_dim, NormTag norm) {
  Subspace acc = Subspace::zero(ambient_dim, norm);
  for (const auto& p : parts) acc = direct_sum(acc, p.with_norm(norm));
  return acc;
}

Subspace intersect(const Subspace& a, const Subspace& b, Index dim) {
  if (a.ambient_dim() != b.ambient_dim()) throw ParameterError("intersect: dimension mismatch");
  if (dim < 0 || dim > std::min(a.dim(), b.dim())) throw ParameterError("intersect: requested dimension too large");
  if (dim == 0) return Subspace::zero(a.ambient_dim(), a.norm());
  const MatrixXd& qa = a.orthonormal();
  const MatrixXd& qb = b.orthonormal();
  const MatrixXd r = qa - qb * (qb.transpose() * qa);
  Eigen::JacobiSVD<MatrixXd> svd(r, Eigen::ComputeFullV);
  return Subspace(qa * svd.matrixV().rightCols(dim), a.norm());
}

GoodComplement good_complement(const std::vector<Subspace>& filtration, const GoodComplementOptions& options) {
  GoodComplement out;
  if (filtration.size() < 2) return out;
  const Index d = filtration.front().ambient_dim();
  const NormTag norm = filtration.front().norm();
  for (const auto& v : filtration) require_compatible(filtration.front(), v, "good_complement");

  for (std::size_t j = 0; j + 1 < filtration.size(); ++j) {
    const Subspace& v = filtration[j];
    const Subspace& vp = filtration[j + 1];
    const double nest = one_sided_distance(vp.with_norm(NormTag::l2), v.with_norm(NormTag::l2));
    if (vp.dim() > v.dim() || nest > grassmann_tolerances().nesting) {
      std::ostringstream os;
      os << "level " << j + 2 << " is not contained in level " << j + 1 << " (one-sided distance " << nest << ")";
      throw FiltrationError(os.str());
    }
  }

  Subspace u_less = Subspace::zero(d, norm);
  for (std::size_t j = 0; j + 1 < filtration.size(); ++j) {
    const Subspace& v = filtration[j];
    const Subspace& vp = filtration[j + 1];
    const Index k = v.dim() - vp.dim();
    if (k == 0) continue;

    MatrixXd chosen(d, 0);
    for (Index l = 0; l < k; ++l) {
      MatrixXd inner(d, vp.dim() + chosen.cols());
      inner << vp.basis(), chosen;
      MatrixXd full(d, u_less.dim() + inner.cols());
      full << u_less.basis(), inner;
      const Subspace inner_span(inner, norm);
      const Subspace full_span(full, norm);

      // Candidates are residuals of V_j's orthonormal directions against
      // V_{j+1} (+) span(u_<l); all of them stay inside V_j.
      VectorXd best_u;
      double best = -1.0;
      for (Index c = 0; c < v.dim(); ++c) {
        const VectorXd x = v.orthonormal().col(c);
        VectorXd w;
        const double r = distance_point_subspace(x, inner_span, &w);
        if (!(r > grassmann_tolerances().rank)) continue;
        const VectorXd u = (x - w) / vector_norm(VectorXd(x - w), norm);
        const double score = distance_point_subspace(u, full_span);
        if (score > best) {
          best = score;
          best_u = u;
        }
      }
      // In polyhedral norms d(., W) is convex, so its maximum over the unit
      // ball of V_j sits at a vertex.
      if (norm != NormTag::l2) {
        std::vector<VectorXd> verts;
        try {
          verts = unit_ball_section_vertices(v);
        } catch (const ParameterError&) {
        }
        for (const auto& x : verts) {
          const double score = distance_point_subspace(x, full_span);
          if (score > std::max(best, grassmann_tolerances().rank)) {
            best = score;
            best_u = x;
          }
        }
      }
      if (best < 0.0) throw FiltrationError("no admissible direction left in the level");
      chosen.conservativeResize(d, chosen.cols() + 1);
      chosen.col(chosen.cols() - 1) = best_u;
      out.step_distances.push_back(best);
      if (!(best > 1.0 - options.eps)) out.nice = false;
    }

    Subspace uj(chosen, norm);
    out.complement_projection_norms.push_back(
        operator_norm(partial_projection(uj, direct_sum(vp, u_less)), norm));
    out.remainder_projection_norms.push_back(
        vp.dim() == 0 ? 0.0 : operator_norm(partial_projection(vp, direct_sum(uj, u_less)), norm));
    u_less = direct_sum(u_less, uj);
    out.complements.push_back(std::move(uj));
    out.levels.push_back(j);
  }
  return out;
}

}  // namespace oseledets
