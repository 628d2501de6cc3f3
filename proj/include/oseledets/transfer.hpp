#pragma once

// Transfer operators of piecewise expanding maps: exact action on piecewise
// polynomial densities, Ulam discretizations, and Lasota-Yorke constants.

#include "oseledets/base.hpp"
#include "oseledets/cocycle.hpp"
#include "oseledets/errors.hpp"
#include "oseledets/maps.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <type_traits>
#include <vector>

namespace oseledets {

struct UlamOptions {
  /// Rational arithmetic for affine maps. Ignored for smooth branches.
  bool exact = true;
  /// Worker threads for row assembly; 0 picks the hardware concurrency.
  unsigned threads = 1;
};

struct UlamOperator {
  std::size_t n_bins = 0;
  /// P_ij = m(B_i cap T^{-1} B_j) / m(B_i); rows sum to one.
  Eigen::MatrixXd matrix;
  bool exact = false;
  /// Nonzero entries of each row, kept when exact.
  std::vector<std::map<std::size_t, Rational>> exact_rows;

  /// Every exact row sums to exactly one. False in floating-point mode.
  bool exactly_row_stochastic() const;
  /// max_i |sum_j P_ij - 1|.
  double row_sum_defect() const;
};

UlamOperator ulam_matrix(const PiecewiseExpandingMap1D& map, std::size_t n_bins, const UlamOptions& options = {});

void write_ulam_csv(std::ostream& os, const UlamOperator& op);

/// Generator omega -> P(T_omega)^T acting on bin densities. Table systems
/// build each matrix once; families are evaluated on demand and memoized.
CocycleGenerator random_ulam_cocycle(const RandomLYSystem& system, std::size_t n_bins,
                                     const UlamOptions& options = {});

namespace detail {
template <class Scalar>
Scalar scalar_from(const Rational& r) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return r;
  else
    return static_cast<Scalar>(to_double(r));
}
}  // namespace detail

/// Density on [0,1] that is a polynomial (power basis in x) on each piece
/// [breaks[k], breaks[k+1]).
template <class Scalar>
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(std::vector<Scalar> breaks, std::vector<std::vector<Scalar>> coefficients)
      : breaks_(std::move(breaks)), coeffs_(std::move(coefficients)) {
    if (breaks_.size() < 2 || coeffs_.size() + 1 != breaks_.size())
      throw ParameterError("piecewise polynomial needs one coefficient list per piece");
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
      if (!(breaks_[k] < breaks_[k + 1])) throw ParameterError("breakpoints must increase");
  }

  static PiecewisePolynomial constant(Scalar c) { return PiecewisePolynomial({Scalar(0), Scalar(1)}, {{c}}); }
  /// Polynomial sum_k c[k] x^k on all of [0,1].
  static PiecewisePolynomial polynomial(std::vector<Scalar> c) {
    return PiecewisePolynomial({Scalar(0), Scalar(1)}, {std::move(c)});
  }

  const std::vector<Scalar>& breaks() const noexcept { return breaks_; }
  const std::vector<std::vector<Scalar>>& coefficients() const noexcept { return coeffs_; }
  std::size_t pieces() const noexcept { return coeffs_.size(); }

  /// Index of the piece containing x (right-continuous, last piece closed).
  std::size_t piece_of(const Scalar& x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(k, pieces() - 1);
  }

  Scalar operator()(const Scalar& x) const {
    const auto& c = coeffs_[piece_of(x)];
    Scalar acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Scalar integral() const {
    Scalar total(0);
    for (std::size_t k = 0; k < pieces(); ++k) {
      Scalar pa = breaks_[k], pb = breaks_[k + 1];
      Scalar a_pow = pa, b_pow = pb;
      for (std::size_t d = 0; d < coeffs_[k].size(); ++d) {
        total += coeffs_[k][d] * (b_pow - a_pow) / Scalar(static_cast<long>(d + 1));
        a_pow *= pa;
        b_pow *= pb;
      }
    }
    return total;
  }

 private:
  std::vector<Scalar> breaks_;
  std::vector<std::vector<Scalar>> coeffs_;
};

/// L_T f(y) = sum_i 1_{T(O_i)}(y) f(xi_i(y)) / |c_i| for affine T, computed
/// without rounding when Scalar is Rational. Throws UnsupportedFormError for
/// smooth branches.
template <class Scalar>
PiecewisePolynomial<Scalar> transfer_apply_exact(const PiecewiseExpandingMap1D& map,
                                                 const PiecewisePolynomial<Scalar>& f) {
  if (!map.is_affine()) throw UnsupportedFormError("exact transfer needs affine branches; use the Ulam path");
  struct Inv {
    Scalar slope, intercept, weight, img_lo, img_hi;  // xi(y) = slope y + intercept
  };
  std::vector<Inv> inv;
  std::vector<Scalar> cuts{Scalar(0), Scalar(1)};
  for (const auto& b : map.branches()) {
    const auto img = b.image_exact();
    const Rational c = b.slope;
    const Rational abs_c = c < 0 ? Rational(-c) : c;
    inv.push_back({detail::scalar_from<Scalar>(1 / c), detail::scalar_from<Scalar>(-b.intercept / c),
                   detail::scalar_from<Scalar>(1 / abs_c), detail::scalar_from<Scalar>(img.first),
                   detail::scalar_from<Scalar>(img.second)});
    cuts.push_back(inv.back().img_lo);
    cuts.push_back(inv.back().img_hi);
    const Scalar lo = detail::scalar_from<Scalar>(b.lo), hi = detail::scalar_from<Scalar>(b.hi);
    const Scalar cs = detail::scalar_from<Scalar>(c), es = detail::scalar_from<Scalar>(b.intercept);
    for (const auto& x : f.breaks())
      if (lo < x && x < hi) cuts.push_back(cs * x + es);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [](const Scalar& x) { return x < Scalar(0) || x > Scalar(1); }),
             cuts.end());

  std::vector<std::vector<Scalar>> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Scalar mid = (cuts[k] + cuts[k + 1]) / Scalar(2);
    std::vector<Scalar> acc;
    for (const auto& g : inv) {
      if (!(g.img_lo < mid && mid < g.img_hi)) continue;
      const auto& p = f.coefficients()[f.piece_of(g.slope * mid + g.intercept)];
      if (acc.size() < p.size()) acc.resize(p.size(), Scalar(0));
      // p(s y + e) expanded by Horner on polynomials in y.
      std::vector<Scalar> h{Scalar(0)};
      for (auto it = p.rbegin(); it != p.rend(); ++it) {
        std::vector<Scalar> next(h.size() + 1, Scalar(0));
        for (std::size_t d = 0; d < h.size(); ++d) {
          next[d] += h[d] * g.intercept;
          next[d + 1] += h[d] * g.slope;
        }
        next[0] += *it;
        h = std::move(next);
      }
      h.resize(p.size());
      for (std::size_t d = 0; d < h.size(); ++d) acc[d] += g.weight * h[d];
    }
    if (acc.empty()) acc.push_back(Scalar(0));
    out.push_back(std::move(acc));
  }
  return PiecewisePolynomial<Scalar>(std::move(cuts), std::move(out));
}

struct ComplexityCounters {
  /// Maximal multiplicity of the closed branch domains of the composition.
  std::size_t c_b = 0;
  /// Maximal multiplicity of the closed branch images.
  std::size_t c_e = 0;
  std::size_t branches = 0;
  /// Certified bounds of |D T^(n)| over all composed branches.
  double min_derivative = 0.0;
  double max_derivative = 0.0;
};

/// Counters of T_{n-1} o ... o T_0, maps[0] applied first. Throws
/// ParameterError for an empty list or more than `max_branches` branches.
ComplexityCounters complexity_counters(const std::vector<PiecewiseExpandingMap1D>& maps,
                                       std::size_t max_branches = 1u << 20);

/// Maps T_{sigma^k omega}, k = 0..n-1.
std::vector<PiecewiseExpandingMap1D> maps_along(const RandomLYSystem& system, const OrbitWindow& orbit,
                                                std::size_t n, std::ptrdiff_t start = 0);

/// C_R n C_b^{1/p} C_e^{1-1/p} (inf |DT^(n)|)^{1/p-1-t}.
double ly_bound_B(const RandomLYSystem& system, const OrbitWindow& orbit, std::size_t n, double p, double t,
                  double c_r = 1.0, std::ptrdiff_t start = 0);

struct KappaStarBound {
  double value = 0.0;
  /// n-th root of C_e(T^(n)).
  double c_e_star = 0.0;
  /// (inf |DT^(n)|)^{-1/n}.
  double chi = 0.0;
  bool quasi_compact = false;
};

/// (1 - 1/p)(log C_e* + log chi) + t log chi from the length-n composition.
KappaStarBound kappa_star_bound(const RandomLYSystem& system, const OrbitWindow& orbit, std::size_t n, double p,
                                double t);

}  // namespace oseledets
