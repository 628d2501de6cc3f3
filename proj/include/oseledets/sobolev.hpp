#pragma once

// Discrete fractional Sobolev norms on the periodic grid, the distance
// between piecewise expanding maps, and a continuity probe for their
// transfer operators.

#include "oseledets/maps.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace oseledets {

/// (mean |g|^p)^{1/p}.
double discrete_lp_norm(const Eigen::VectorXd& g, double p);

/// |F^{-1}((1 + k^2)^{t/2} F g)|_{L_p} with k the signed integer frequency.
/// Throws ParameterError unless the grid size is a power of two, p > 1 and t >= 0.
double discrete_sobolev_norm(const Eigen::VectorXd& samples, double t, double p);

struct LYDistanceOptions {
  double alpha = 0.5;
  /// Sample points per branch domain (endpoints included).
  std::size_t samples = 257;
};

/// C^{1+alpha} norm of g on [a, b]: sup|g| + sup|g'| + Hoelder_alpha(g'),
/// from samples of g and its analytic derivative.
double c1alpha_norm(const std::function<double(double)>& g, const std::function<double(double)>& dg, double a,
                    double b, const LYDistanceOptions& options = {});

/// 1 when the branch counts differ or some paired domains are disjoint;
/// otherwise the sum of the branchwise C^{1+alpha} difference on overlaps,
/// the C^{1+alpha} norm difference and the Hausdorff distance of domains.
double ly_distance(const PiecewiseExpandingMap1D& s, const PiecewiseExpandingMap1D& t,
                   const LYDistanceOptions& options = {});

using Density = std::function<double(double)>;

/// (L_T f)(m / grid) for m = 0..grid-1.
Eigen::VectorXd transfer_on_grid(const PiecewiseExpandingMap1D& map, const Density& f, std::size_t grid);

struct ProbePoint {
  double distance = 0.0;
  double sobolev = 0.0;
  double lp = 0.0;
};

/// |L_{S_k} f - L_T f| for each perturbation, paired with d(S_k, T).
std::vector<ProbePoint> continuity_probe(const PiecewiseExpandingMap1D& t, const std::vector<PiecewiseExpandingMap1D>& perturbations,
                                         const Density& f, double p, double sobolev_t, std::size_t grid = 1024,
                                         const LYDistanceOptions& distance_options = {});

}  // namespace oseledets
