#include "oseledets/sobolev.hpp"

#include "oseledets/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>

namespace oseledets {

using Eigen::VectorXd;

double discrete_lp_norm(const VectorXd& g, double p) {
  if (!(p >= 1.0)) throw ParameterError("L_p norm needs p >= 1");
  if (g.size() == 0) return 0.0;
  return std::pow(g.array().abs().pow(p).mean(), 1.0 / p);
}

double discrete_sobolev_norm(const VectorXd& samples, double t, double p) {
  const auto n = static_cast<std::size_t>(samples.size());
  if (n == 0 || (n & (n - 1)) != 0) throw ParameterError("Sobolev grid size must be a power of two");
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  if (!(t >= 0.0)) throw ParameterError("t must be non-negative");
  if (t == 0.0) return discrete_lp_norm(samples, p);
  std::vector<std::complex<double>> time(n), freq;
  for (std::size_t i = 0; i < n; ++i) time[i] = samples[static_cast<Eigen::Index>(i)];
  Eigen::FFT<double> fft;
  fft.fwd(freq, time);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    freq[j] *= std::pow(1.0 + k * k, 0.5 * t);
  }
  fft.inv(time, freq);
  VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) g[static_cast<Eigen::Index>(i)] = time[i].real();
  return discrete_lp_norm(g, p);
}

double c1alpha_norm(const std::function<double(double)>& g, const std::function<double(double)>& dg, double a,
                    double b, const LYDistanceOptions& options) {
  const std::size_t m = std::max<std::size_t>(options.samples, 2);
  std::vector<double> x(m), d(m);
  double sup = 0.0, dsup = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    d[i] = dg(x[i]);
    sup = std::max(sup, std::abs(g(x[i])));
    dsup = std::max(dsup, std::abs(d[i]));
  }
  double holder = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double diff = std::abs(d[j] - d[i]);
      if (diff > 0.0) holder = std::max(holder, diff / std::pow(x[j] - x[i], options.alpha));
    }
  return sup + dsup + holder;
}

double ly_distance(const PiecewiseExpandingMap1D& s, const PiecewiseExpandingMap1D& t, const LYDistanceOptions& options) {
  if (s.branch_count() != t.branch_count()) return 1.0;
  double diff = 0.0, norm_gap = 0.0, hausdorff = 0.0;
  for (std::size_t i = 0; i < s.branch_count(); ++i) {
    const Branch& bs = s.branches()[i];
    const Branch& bt = t.branches()[i];
    const double lo = std::max(bs.lo_d(), bt.lo_d()), hi = std::min(bs.hi_d(), bt.hi_d());
    if (!(lo < hi)) return 1.0;
    diff = std::max(diff, c1alpha_norm([&](double x) { return bs.value(x) - bt.value(x); },
                                       [&](double x) { return bs.derivative(x) - bt.derivative(x); }, lo, hi, options));
    const double ns = c1alpha_norm([&](double x) { return bs.value(x); }, [&](double x) { return bs.derivative(x); },
                                   bs.lo_d(), bs.hi_d(), options);
    const double nt = c1alpha_norm([&](double x) { return bt.value(x); }, [&](double x) { return bt.derivative(x); },
                                   bt.lo_d(), bt.hi_d(), options);
    norm_gap = std::max(norm_gap, std::abs(ns - nt));
    hausdorff = std::max(hausdorff, std::max(std::abs(bs.lo_d() - bt.lo_d()), std::abs(bs.hi_d() - bt.hi_d())));
  }
  return diff + norm_gap + hausdorff;
}

VectorXd transfer_on_grid(const PiecewiseExpandingMap1D& map, const Density& f, std::size_t grid) {
  VectorXd out = VectorXd::Zero(static_cast<Eigen::Index>(grid));
  for (const auto& b : map.branches()) {
    const auto [y1, y2] = b.image();
    for (std::size_t m = 0; m < grid; ++m) {
      const double y = static_cast<double>(m) / static_cast<double>(grid);
      if (y < y1 || y >= y2) continue;
      const double x = std::clamp(b.inverse(y), b.lo_d(), b.hi_d());
      out[static_cast<Eigen::Index>(m)] += f(x) / std::abs(b.derivative(x));
    }
  }
  return out;
}

std::vector<ProbePoint> continuity_probe(const PiecewiseExpandingMap1D& t,
                                         const std::vector<PiecewiseExpandingMap1D>& perturbations, const Density& f,
                                         double p, double sobolev_t, std::size_t grid,
                                         const LYDistanceOptions& distance_options) {
  const VectorXd base = transfer_on_grid(t, f, grid);
  std::vector<ProbePoint> out;
  out.reserve(perturbations.size());
  for (const auto& s : perturbations) {
    const VectorXd diff = transfer_on_grid(s, f, grid) - base;
    out.push_back({ly_distance(s, t, distance_options), discrete_sobolev_norm(diff, sobolev_t, p),
                   discrete_lp_norm(diff, p)});
  }
  return out;
}

}  // namespace oseledets
