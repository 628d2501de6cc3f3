#pragma once

// Lyapunov exponents, multiplicities and the Oseledets filtration along an
// orbit window, plus the quasi-compactness diagnostics.

#include "oseledets/base.hpp"
#include "oseledets/cocycle.hpp"
#include "oseledets/grassmann.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oseledets {

enum class StartFrame {
  /// Leading columns of the identity.
  identity,
  /// A constant positive first column followed by seeded Gaussian columns.
  /// Needed when the coordinate directions are not generic, as for Ulam
  /// matrices of maps with invariant sub-intervals.
  positive_generic,
};

struct LyapunovOptions {
  /// Adjacent sorted values whose gap is at most this are merged.
  double gap_threshold = 0.05;
  /// Rates below this are reported as -infinity (kernel directions).
  double floor = -30.0;
  /// Steps taken from offsets [offset - burn_in, offset) before measuring.
  std::size_t burn_in = 0;
  /// Base offset omega.
  std::ptrdiff_t offset = 0;
  /// Number of leading frame columns to follow; 0 means the full dimension.
  Eigen::Index count = 0;
  /// Norm in which the first frame vector's growth is measured.
  NormTag norm = NormTag::l2;
  StartFrame frame = StartFrame::identity;
  std::uint64_t frame_seed = 0x5eed;
};

struct ConvergencePoint {
  std::size_t n = 0;
  std::vector<double> estimates;  ///< sorted descending
};

struct LyapunovSpectrum {
  /// Distinct finite exponents, strictly decreasing.
  std::vector<double> exponents;
  std::vector<int> multiplicities;
  /// Per-column rates, sorted descending; -infinity below the floor.
  std::vector<double> raw;
  /// Number of raw values at -infinity.
  int kernel_dim = 0;
  std::optional<double> kappa_bound;
  std::size_t n_used = 0;
  std::ptrdiff_t offset = 0;
  double gap_threshold = 0.05;
  /// True when fewer columns than the ambient dimension were followed.
  bool truncated = false;
  std::vector<ConvergencePoint> history;
  /// Some adjacent gap lies within a factor 2 of the threshold.
  bool degenerate = false;
  std::vector<std::string> warnings;

  double max_exponent() const;
  int resolved_dimension() const;
};

/// Sequential thin-QR exponents with positive-diagonal sign fixing. The
/// top value is the growth of the first frame vector in `options.norm`.
/// Throws ParameterError for n < 10.
LyapunovSpectrum lyapunov_exponents(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                                    const LyapunovOptions& options = {});

LyapunovSpectrum lyapunov_exponents(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                                    double gap_threshold);

/// Groups descending finite values into clusters (mean value, size).
void cluster_exponents(const std::vector<double>& sorted_desc, double gap_threshold, std::vector<double>& values,
                       std::vector<int>& multiplicities, bool& degenerate);

/// (1/n) log of the unsorted R diagonal of the sequential QR, full frame.
std::vector<double> sequential_qr_rates(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                                        std::size_t n);

/// (1/n) log of the R diagonal of a single QR of the accumulated product.
std::vector<double> product_qr_rates(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                                     std::size_t n);

/// (1/n) log sigma_i(L^(n)), descending; -infinity for zero singular values.
std::vector<double> svd_rates(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                              std::size_t n);

struct FiltrationOptions {
  /// Resolve this many leading levels; 0 means all finite clusters.
  std::size_t levels = 0;
  /// Seed of the generic starting frame of the adjoint iteration.
  std::uint64_t frame_seed = 0x5eed;
  /// Measure growth of a random vector of each V_j \ V_{j+1} over n/2 steps.
  bool check_growth = false;
};

struct FiltrationAt {
  std::ptrdiff_t offset = 0;
  std::size_t horizon = 0;
  /// V_1 (whole space) > V_2 > ... > V_{L+1}; the last entry may be {0}.
  std::vector<Subspace> levels;
  /// Rates of the adjoint iteration's columns.
  std::vector<double> rates;
  /// |growth - lambda_j| per resolved level when requested.
  std::vector<double> growth_errors;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// V_{j+1}(omega) is the complement of the leading m_1+...+m_j right
/// singular directions of L^(n) at `offset`, obtained from the QR
/// iteration of the transposed factors.
FiltrationAt filtration_at(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                           std::size_t n, const LyapunovSpectrum& spectrum, const FiltrationOptions& options = {});

/// (1/n) log |L^(n) v| from `start`; -infinity once v is annihilated.
double growth_rate(const CocycleGenerator& gen, const OrbitWindow& orbit, const Eigen::VectorXd& v, std::size_t n,
                   std::ptrdiff_t start = 0, NormTag norm = NormTag::l2);

using OffsetSeries = std::function<double(std::ptrdiff_t)>;

/// Birkhoff average of log B over offsets 0..n-1. Throws ParameterError
/// when some B <= 0.
double hennion_kappa_bound(const OffsetSeries& b_series, const OrbitWindow& orbit, std::size_t n);

/// (1/n) log sigma_{rank_cut+1}(L^(n)), realized as the (rank_cut+1)-th
/// largest sequential-QR rate; -infinity below the floor.
double index_of_compactness_proxy(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                                  Eigen::Index rank_cut, double floor = -30.0);

}  // namespace oseledets
