#pragma once

// Piecewise expanding maps of [0,1] and random systems built from them.
//
// A branch is T(x) = c x + e + rho sin(2 pi x) on an open interval (lo, hi).
// rho = 0 gives the affine form, whose coefficients and endpoints are kept
// as exact rationals. For rho != 0 the derivative bounds |c| -+ 2 pi |rho|
// are analytic, so expansion is certified without sampling.

#include "oseledets/base.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <string>
#include <vector>

namespace oseledets {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double.
Rational to_rational(double x);
double to_double(const Rational& r);
/// Parses "3", "-2/5" or a decimal literal such as "0.125" (exactly).
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

struct Branch {
  Rational lo;
  Rational hi;
  Rational slope;
  Rational intercept;
  double rho = 0.0;

  static Branch affine(Rational lo, Rational hi, Rational slope, Rational intercept);
  static Branch smooth(Rational lo, Rational hi, Rational slope, Rational intercept, double rho);

  bool is_affine() const noexcept { return rho == 0.0; }
  bool increasing() const { return slope > 0; }
  double lo_d() const { return to_double(lo); }
  double hi_d() const { return to_double(hi); }

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  /// Certified lower / upper bounds of |T'| on the closed domain.
  double min_abs_derivative() const;
  double max_abs_derivative() const;
  /// Closed image interval [min, max].
  std::pair<double, double> image() const;
  /// Exact image endpoints for affine branches.
  std::pair<Rational, Rational> image_exact() const;
  /// Inverse branch on the image: closed form when affine, bisection otherwise.
  double inverse(double y) const;
};

class PiecewiseExpandingMap1D {
 public:
  /// Throws ParameterError when the branches violate the map invariants.
  PiecewiseExpandingMap1D(std::vector<Branch> branches, std::string name = "");

  const std::vector<Branch>& branches() const noexcept { return branches_; }
  std::size_t branch_count() const noexcept { return branches_.size(); }
  const std::string& name() const noexcept { return name_; }
  bool is_affine() const;

  double operator()(double x) const;
  double min_expansion() const;
  /// max_i sup|T_i| + sup|T_i'| + Hoelder_alpha(T_i') on the branch domains.
  double holder_bound(double alpha = 1.0) const;

 private:
  std::vector<Branch> branches_;
  std::string name_;
};

struct RandomLYSystem {
  Driver driver;
  /// Map for each driver symbol; used when non-empty.
  std::vector<PiecewiseExpandingMap1D> table;
  /// State-dependent family for drivers without a finite alphabet.
  std::function<PiecewiseExpandingMap1D(const BaseState&)> family;
  double alpha = 1.0;
  std::string name;

  PiecewiseExpandingMap1D map_at(const BaseState& s) const;
  bool finite() const noexcept { return !table.empty(); }
};

/// Throws ParameterError if the table does not cover the driver's alphabet
/// or some map fails its invariants.
void validate(const RandomLYSystem& system);

namespace presets {

PiecewiseExpandingMap1D doubling();
PiecewiseExpandingMap1D tripling();
/// Doubling on each half of [0,1]; one half-interval each of [0,1] u [1,2].
PiecewiseExpandingMap1D buzzi_keep();
/// Doubling that exchanges the two halves.
PiecewiseExpandingMap1D buzzi_swap();
/// Full two-branch map with breakpoint 1/s, slopes s and s/(s-1).
PiecewiseExpandingMap1D full_two_branch(const Rational& s);
/// Slope a on [0,1/2]: a-1 full branches onto [0,1/2], one onto [1/2,1].
/// Slope b on [1/2,1]: b-1 onto [1/2,1], one onto [0,1/2].
PiecewiseExpandingMap1D two_interval_markov(long a, long b, const std::string& name = "");
/// Two-interval Markov map with stay probabilities 9/10 on [0,1/2] and 7/8 on [1/2,1].
PiecewiseExpandingMap1D mixture_a();
/// The same with the roles of the intervals exchanged.
PiecewiseExpandingMap1D mixture_b();
/// Affine two-branch map on the partition (0, 2/5), (2/5, 1) with first
/// slope 2 + delta and second branch 3/2 (x - 2/5).
PiecewiseExpandingMap1D partial_two_branch(const Rational& delta);
/// Doubling map plus rho sin(2 pi x) on each branch.
PiecewiseExpandingMap1D smooth_doubling(double rho);

RandomLYSystem constant_system(const PiecewiseExpandingMap1D& map);
RandomLYSystem buzzi_swap_system();
RandomLYSystem bernoulli_mixture_system(double p = 0.5);
/// Slope s = lo + (hi - lo) * phase driven by an irrational rotation.
RandomLYSystem random_slope_system(double lo, double hi, double angle = kGoldenAngle);
RandomLYSystem alternating_system(const PiecewiseExpandingMap1D& a, const PiecewiseExpandingMap1D& b);

}  // namespace presets

}  // namespace oseledets
