#include "oseledets/spectrum.hpp"

#include "oseledets/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oseledets {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Thin QR of m with a non-negative R diagonal. Returns Q (same shape as m)
// and writes log|R_ii| into logs.
MatrixXd thin_qr(const MatrixXd& m, VectorXd& logs) {
  const Index k = m.cols();
  Eigen::HouseholderQR<MatrixXd> qr(m);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(m.rows(), k);
  logs.resize(k);
  for (Index i = 0; i < k; ++i) {
    const double r = qr.matrixQR()(i, i);
    if (r < 0.0) q.col(i) = -q.col(i);
    logs[i] = r == 0.0 ? kNegInf : std::log(std::abs(r));
  }
  return q;
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), [](double a, double b) { return a > b; });
  return v;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

double LyapunovSpectrum::max_exponent() const { return exponents.empty() ? kNegInf : exponents.front(); }

int LyapunovSpectrum::resolved_dimension() const {
  int s = 0;
  for (int m : multiplicities) s += m;
  return s;
}

void cluster_exponents(const std::vector<double>& sorted, double gap_threshold, std::vector<double>& values,
                       std::vector<int>& multiplicities, bool& degenerate) {
  values.clear();
  multiplicities.clear();
  degenerate = false;
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i])) break;
    if (count > 0) {
      const double gap = sorted[i - 1] - sorted[i];
      if (gap >= 0.5 * gap_threshold && gap < 2.0 * gap_threshold) degenerate = true;
      if (gap > gap_threshold) {
        values.push_back(sum / count);
        multiplicities.push_back(count);
        sum = 0.0;
        count = 0;
      }
    }
    sum += sorted[i];
    ++count;
  }
  if (count > 0) {
    values.push_back(sum / count);
    multiplicities.push_back(count);
  }
}

LyapunovSpectrum lyapunov_exponents(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                                    const LyapunovOptions& options) {
  if (n < 10) throw ParameterError("lyapunov_exponents needs n >= 10");
  if (!(options.gap_threshold > 0.0)) throw ParameterError("gap_threshold must be positive");
  const Index d = gen.dim();
  const Index k = options.count == 0 ? d : std::min(options.count, d);
  const auto len = static_cast<std::ptrdiff_t>(n);
  const auto burn = static_cast<std::ptrdiff_t>(options.burn_in);
  orbit.require(options.offset - burn, options.offset + len - 1);

  MatrixXd q = MatrixXd::Identity(d, k);
  VectorXd logs;
  if (options.frame == StartFrame::positive_generic) {
    q.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    if (k > 1) q.rightCols(k - 1) = detail::normal_matrix(options.frame_seed, 18, d, k - 1);
    q = thin_qr(q, logs);
  }
  for (std::ptrdiff_t i = options.offset - burn; i < options.offset; ++i) q = thin_qr(gen(orbit.state(i)) * q, logs);

  VectorXd sums = VectorXd::Zero(k);
  double top_sum = 0.0;
  LyapunovSpectrum out;
  auto estimates = [&](std::size_t steps) {
    std::vector<double> e(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) e[static_cast<std::size_t>(i)] = sums[i] / static_cast<double>(steps);
    e[0] = top_sum / static_cast<double>(steps);
    for (auto& v : e)
      if (v < options.floor) v = kNegInf;
    return sorted_desc(std::move(e));
  };

  for (std::ptrdiff_t step = 0; step < len; ++step) {
    const MatrixXd l = gen(orbit.state(options.offset + step));
    const MatrixXd lq = l * q;
    const double before = vector_norm(q.col(0), options.norm);
    const double after = vector_norm(lq.col(0), options.norm);
    top_sum += after == 0.0 ? kNegInf : std::log(after / before);
    q = thin_qr(lq, logs);
    sums += logs;
    const auto done = static_cast<std::size_t>(step + 1);
    if (is_power_of_two(done) || done == n) out.history.push_back({done, estimates(done)});
  }

  out.raw = estimates(n);
  out.n_used = n;
  out.offset = options.offset;
  out.gap_threshold = options.gap_threshold;
  out.truncated = k < d;
  out.kernel_dim = static_cast<int>(std::count_if(out.raw.begin(), out.raw.end(), [](double v) { return !std::isfinite(v); }));
  cluster_exponents(out.raw, options.gap_threshold, out.exponents, out.multiplicities, out.degenerate);
  // The top cluster is reported at the maximal exponent estimate.
  if (!out.exponents.empty()) out.exponents.front() = out.raw.front();
  if (out.degenerate) {
    std::ostringstream os;
    os << "spectrum is near-degenerate: some gap lies within a factor 2 of the threshold " << options.gap_threshold;
    out.warnings.push_back(os.str());
  }
  if (out.truncated) out.warnings.push_back("only the leading " + std::to_string(k) + " directions were followed");
  return out;
}

LyapunovSpectrum lyapunov_exponents(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                                    double gap_threshold) {
  LyapunovOptions o;
  o.gap_threshold = gap_threshold;
  return lyapunov_exponents(gen, orbit, n, o);
}

std::vector<double> sequential_qr_rates(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                                        std::size_t n) {
  if (n == 0) throw ParameterError("sequential_qr_rates needs n >= 1");
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(start, start + len - 1);
  const Index d = gen.dim();
  MatrixXd q = MatrixXd::Identity(d, d);
  VectorXd logs, sums = VectorXd::Zero(d);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    q = thin_qr(gen(orbit.state(start + i)) * q, logs);
    sums += logs;
  }
  std::vector<double> out(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = sums[i] / static_cast<double>(n);
  return out;
}

std::vector<double> product_qr_rates(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                                     std::size_t n) {
  if (n == 0) throw ParameterError("product_qr_rates needs n >= 1");
  const ScaledMatrix p = forward_product_scaled(gen, orbit, start, n);
  VectorXd logs;
  thin_qr(p.matrix, logs);
  std::vector<double> out(static_cast<std::size_t>(logs.size()));
  for (Index i = 0; i < logs.size(); ++i)
    out[static_cast<std::size_t>(i)] = (logs[i] + p.log_scale) / static_cast<double>(n);
  return out;
}

std::vector<double> svd_rates(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                              std::size_t n) {
  if (n == 0) throw ParameterError("svd_rates needs n >= 1");
  const ScaledMatrix p = forward_product_scaled(gen, orbit, start, n);
  Eigen::JacobiSVD<MatrixXd> svd(p.matrix);
  std::vector<double> out;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()[i];
    out.push_back(s == 0.0 ? kNegInf : (std::log(s) + p.log_scale) / static_cast<double>(n));
  }
  return out;
}

FiltrationAt filtration_at(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                           std::size_t n, const LyapunovSpectrum& spectrum, const FiltrationOptions& options) {
  if (n == 0) throw ParameterError("filtration_at needs n >= 1");
  const Index d = gen.dim();
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(offset, offset + len - 1);

  std::size_t n_levels = spectrum.exponents.size();
  if (options.levels != 0) n_levels = std::min(n_levels, options.levels);
  std::vector<Index> cumulative;
  Index k_max = 0;
  for (std::size_t j = 0; j < n_levels; ++j) {
    k_max += spectrum.multiplicities[j];
    cumulative.push_back(k_max);
  }
  if (k_max > d) throw ParameterError("spectrum multiplicities exceed the ambient dimension");

  FiltrationAt out;
  out.offset = offset;
  out.horizon = n;
  out.degenerate = spectrum.degenerate;
  if (spectrum.degenerate) out.warnings.push_back("filtration built from a near-degenerate spectrum");
  out.levels.push_back(Subspace::whole(d));
  if (k_max == 0) return out;

  VectorXd logs, sums = VectorXd::Zero(k_max);
  MatrixXd q = thin_qr(detail::normal_matrix(options.frame_seed, 16, d, k_max), logs);
  for (std::ptrdiff_t i = offset + len - 1; i >= offset; --i) {
    q = thin_qr(gen(orbit.state(i)).transpose() * q, logs);
    sums += logs;
  }
  for (Index i = 0; i < k_max; ++i) out.rates.push_back(sums[i] / static_cast<double>(n));

  for (std::size_t j = 0; j < n_levels; ++j) {
    const Index kj = cumulative[j];
    Eigen::HouseholderQR<MatrixXd> qr(q.leftCols(kj));
    const MatrixXd full = qr.householderQ();
    out.levels.emplace_back(full.rightCols(d - kj));
  }

  // Rate-midpoint classification of the adjoint columns.
  const auto& lam = spectrum.exponents;
  Index col = 0;
  for (std::size_t j = 0; j < n_levels; ++j) {
    const double upper = j == 0 ? std::numeric_limits<double>::infinity() : 0.5 * (lam[j - 1] + lam[j]);
    const double lower = j + 1 < lam.size() ? 0.5 * (lam[j] + lam[j + 1]) : kNegInf;
    for (int c = 0; c < spectrum.multiplicities[j]; ++c, ++col) {
      const double r = out.rates[static_cast<std::size_t>(col)];
      if (!(r <= upper && r > lower)) {
        std::ostringstream os;
        os << "column " << col << " has rate " << r << " outside the band of level " << j + 1;
        out.warnings.push_back(os.str());
      }
    }
  }

  if (options.check_growth) {
    const std::size_t n_check = std::max<std::size_t>(1, n / 2);
    for (std::size_t j = 0; j < n_levels; ++j) {
      const MatrixXd& basis = out.levels[j].orthonormal();
      const VectorXd coeff = detail::normal_matrix(options.frame_seed, 17 + j, basis.cols(), 1).col(0);
      const VectorXd v = basis * coeff;
      out.growth_errors.push_back(std::abs(growth_rate(gen, orbit, v, n_check, offset) - lam[j]));
    }
  }
  return out;
}

double growth_rate(const CocycleGenerator& gen, const OrbitWindow& orbit, const VectorXd& v, std::size_t n,
                   std::ptrdiff_t start, NormTag norm) {
  if (n == 0) throw ParameterError("growth_rate needs n >= 1");
  if (v.size() != gen.dim()) throw ParameterError("growth_rate: vector has the wrong length");
  const double n0 = vector_norm(v, norm);
  if (n0 == 0.0) throw ParameterError("growth_rate needs a nonzero vector");
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(start, start + len - 1);
  VectorXd x = v / n0;
  double sum = 0.0;
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const MatrixXd l = gen(orbit.state(start + i));
    VectorXd y = l * x;
    const double ny = vector_norm(y, norm);
    if (ny == 0.0 || ny <= 1e-15 * l.cwiseAbs().maxCoeff()) return kNegInf;
    sum += std::log(ny);
    x = y / ny;
  }
  return sum / static_cast<double>(n);
}

double hennion_kappa_bound(const OffsetSeries& b_series, const OrbitWindow& orbit, std::size_t n) {
  if (n == 0) throw ParameterError("hennion_kappa_bound needs n >= 1");
  orbit.require(0, static_cast<std::ptrdiff_t>(n) - 1);
  double sum = 0.0;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const double b = b_series(i);
    if (!(b > 0.0)) {
      std::ostringstream os;
      os << "B must be positive, got " << b << " at offset " << i;
      throw ParameterError(os.str());
    }
    sum += std::log(b);
  }
  return sum / static_cast<double>(n);
}

double index_of_compactness_proxy(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                                  Index rank_cut, double floor) {
  if (rank_cut < 0 || rank_cut >= gen.dim()) throw ParameterError("rank_cut must lie in [0, d)");
  if (n == 0) throw ParameterError("index_of_compactness_proxy needs n >= 1");
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(0, len - 1);
  const Index k = rank_cut + 1;
  MatrixXd q = MatrixXd::Identity(gen.dim(), k);
  VectorXd logs, sums = VectorXd::Zero(k);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    q = thin_qr(gen(orbit.state(i)) * q, logs);
    sums += logs;
  }
  std::vector<double> rates(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) rates[static_cast<std::size_t>(i)] = sums[i] / static_cast<double>(n);
  rates = sorted_desc(rates);
  const double r = rates.back();
  return r < floor ? kNegInf : r;
}

}  // namespace oseledets
