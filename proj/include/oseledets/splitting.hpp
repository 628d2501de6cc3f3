#pragma once

// The semi-invertible Oseledets splitting X = V(omega) (+) Y_1 (+) ... (+) Y_l,
// obtained by pushing good complements forward from sigma^{-n} omega.
//
// Y_j is computed as (L^(n) U_{<=j}(sigma^{-n} omega)) cap V_j(omega). This
// equals L^(n) U_j(sigma^{-n} omega) but keeps the slower level j from being
// swamped by round-off along the faster directions during the push-forward.

#include "oseledets/cocycle.hpp"
#include "oseledets/grassmann.hpp"
#include "oseledets/spectrum.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oseledets {

/// Image of U under L^(n) starting at `start`, re-orthonormalized after every
/// factor. Throws CollapseError (with the offending step) when the image
/// loses rank.
Subspace pushforward_space(const CocycleGenerator& gen, const OrbitWindow& orbit, const Subspace& u,
                           std::size_t n, std::ptrdiff_t start);

/// U given at sigma^{-n} omega, pushed to omega.
Subspace pushforward_space(const CocycleGenerator& gen, const OrbitWindow& orbit, const Subspace& u, std::size_t n);

struct SplittingOptions {
  std::size_t n_start = 8;
  std::size_t n_max = 256;
  double tol = 1e-6;
  /// Horizon of the forward products that define V_j.
  std::size_t filtration_horizon = 64;
  /// Number of leading levels to compute; 0 means every finite cluster.
  std::size_t levels = 0;
  /// Stop doubling once d(Y^(n), Y^(2n)) < tol. Off for full traces.
  bool stop_early = true;
  std::ptrdiff_t offset = 0;
  NormTag norm = NormTag::l2;
  /// When set, each U_j is replaced by the graph {u + G u} of a seeded map
  /// G: U_j -> V_{j+1} with |G| = 0.5. Another valid good complement.
  std::optional<std::uint64_t> alternative_complement_seed;
  /// Also measure sup_n g_n (proof constant M).
  bool measure_m = true;
};

struct ConvergenceReport {
  std::vector<std::size_t> n;        ///< n_i of each comparison d(Y^(n_i), Y^(2 n_i))
  std::vector<double> distances;
  double alpha_hat = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t fit_points = 0;
  std::size_t stopping_n = 0;
  bool converged = false;
  /// sup over the visited n of g_n.
  double m_hat = std::numeric_limits<double>::quiet_NaN();
  /// Smallest sine-type separation between Y^(n) and V_{j+1}(omega).
  double transversality = std::numeric_limits<double>::quiet_NaN();
  std::size_t retries = 0;
};

/// Least-squares slope of log d against n over points with d > floor;
/// alpha_hat = -slope.
void fit_decay_rate(ConvergenceReport& report, double floor = 1e-13);

struct SplittingResult {
  std::ptrdiff_t offset = 0;
  std::size_t horizon = 0;
  std::vector<Subspace> spaces;          ///< Y_1..Y_L
  std::vector<int> multiplicities;
  std::vector<double> exponents;
  Subspace remainder = Subspace::zero(1);  ///< V_{L+1}(omega)
  std::vector<Subspace> filtration;      ///< V_1..V_{L+1} at omega
  /// |Pi_{V_{j+1} || Y_j}| and |Pi_{Y_j || V_{j+1}}| restricted to V_j.
  std::vector<double> remainder_projection_norms;
  std::vector<double> space_projection_norms;
  std::vector<ConvergenceReport> convergence;
  bool converged = false;
  std::vector<std::string> warnings;
};

SplittingResult compute_splitting(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                  const LyapunovSpectrum& spectrum, const SplittingOptions& options = {});

/// Orbit offsets a compute_splitting call reads.
std::pair<std::ptrdiff_t, std::ptrdiff_t> splitting_window(const SplittingOptions& options);

struct EquivarianceReport {
  std::vector<double> distances;  ///< d(L(omega) Y_j(omega), Y_j(sigma omega))
  double tolerance = 0.0;
  bool passed = false;
};

/// `next` must be computed at offset here.offset + 1 on the same orbit.
EquivarianceReport check_equivariance(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                      const SplittingResult& here, const SplittingResult& next, double tol = 1e-6);

struct GrowthReport {
  /// |growth_rate - lambda_j| for each nice-basis vector of each Y_j.
  std::vector<std::vector<double>> level_errors;
  std::vector<double> remainder_rates;
  /// Steps used for the remainder; 0 when the check was below precision.
  std::size_t remainder_n = 0;
  double remainder_bound = 0.0;
  double level_tolerance = 0.1;
  bool passed = false;
};

/// Remainder vectors must grow no faster than `remainder_bound` + 0.1.
/// A computed V carries an O(eps) component along the Y_j, so the remainder
/// is followed for at most min(n_check, horizon / 2, 30 / gap) steps, and
/// skipped when that leaves fewer than 8.
/// Without a bound the next unresolved exponent (or kappa_bound) is used.
GrowthReport check_growth(const SplittingResult& result, const CocycleGenerator& gen, const OrbitWindow& orbit,
                          std::size_t n_check, std::optional<double> remainder_bound = std::nullopt,
                          const LyapunovSpectrum* spectrum = nullptr, std::uint64_t seed = 7);

struct UniquenessReport {
  /// max_j d(Y_j, Y_j'); NaN when either run failed to converge.
  double distance = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  bool passed = false;
};

UniquenessReport uniqueness_probe(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                  const LyapunovSpectrum& spectrum, const SplittingOptions& options,
                                  std::uint64_t alternative_complement_seed);

enum class Verdict { tempered, not_tempered, inconclusive };
std::string_view to_string(Verdict v) noexcept;

struct TemperednessReport {
  Verdict forward = Verdict::inconclusive;
  Verdict backward = Verdict::inconclusive;
  Verdict overall = Verdict::inconclusive;
  std::vector<std::size_t> n;
  /// max_{0<=k<=n} |log f(sigma^{+-k} omega)| / n at dyadic n.
  std::vector<double> forward_slope;
  std::vector<double> backward_slope;
  double threshold = 0.02;
};

/// `log_f(k)` is log f(sigma^k omega), needed on [-n_max, n_max].
TemperednessReport temperedness_test_log(const OffsetSeries& log_f, std::size_t n_max = 1024,
                                         double threshold = 0.02);

/// Same for a positive series f.
TemperednessReport temperedness_test(const OffsetSeries& f, std::size_t n_max = 1024, double threshold = 0.02);

}  // namespace oseledets
