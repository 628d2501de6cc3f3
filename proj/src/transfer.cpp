#include "oseledets/transfer.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

namespace oseledets {

using Eigen::MatrixXd;

namespace {

double approx(const Rational& r) { return to_double(r); }
double approx(double x) { return x; }

template <class S>
std::map<std::size_t, S> affine_row(const PiecewiseExpandingMap1D& map, std::size_t i, std::size_t n) {
  std::map<std::size_t, S> row;
  const S step = S(1) / S(static_cast<long>(n));
  const S a = S(static_cast<long>(i)) * step, b = S(static_cast<long>(i + 1)) * step;
  for (const auto& br : map.branches()) {
    const S lo = std::max(a, detail::scalar_from<S>(br.lo));
    const S hi = std::min(b, detail::scalar_from<S>(br.hi));
    if (!(lo < hi)) continue;
    const S c = detail::scalar_from<S>(br.slope), e = detail::scalar_from<S>(br.intercept);
    S y1 = c * lo + e, y2 = c * hi + e;
    if (y2 < y1) std::swap(y1, y2);
    const S abs_c = c < S(0) ? S(-c) : c;
    const double guess = std::floor(static_cast<double>(n) * approx(y1));
    std::size_t j = guess < 1.0 ? 0 : static_cast<std::size_t>(guess) - 1;
    for (; j < n; ++j) {
      const S bl = S(static_cast<long>(j)) * step, bh = S(static_cast<long>(j + 1)) * step;
      if (!(bl < y2)) break;
      const S overlap = std::min(y2, bh) - std::max(y1, bl);
      if (overlap > S(0)) row[j] += overlap / abs_c * S(static_cast<long>(n));
    }
  }
  return row;
}

std::map<std::size_t, double> smooth_row(const PiecewiseExpandingMap1D& map, std::size_t i, std::size_t n) {
  std::map<std::size_t, double> row;
  const double a = static_cast<double>(i) / static_cast<double>(n);
  const double b = static_cast<double>(i + 1) / static_cast<double>(n);
  for (const auto& br : map.branches()) {
    const double lo = std::max(a, br.lo_d()), hi = std::min(b, br.hi_d());
    if (!(lo < hi)) continue;
    double y1 = br.value(lo), y2 = br.value(hi);
    if (y2 < y1) std::swap(y1, y2);
    const double guess = std::floor(static_cast<double>(n) * y1);
    std::size_t j = guess < 1.0 ? 0 : static_cast<std::size_t>(guess) - 1;
    for (; j < n; ++j) {
      const double bl = static_cast<double>(j) / static_cast<double>(n);
      const double bh = static_cast<double>(j + 1) / static_cast<double>(n);
      if (!(bl < y2)) break;
      const double u = std::max(y1, bl), v = std::min(y2, bh);
      if (!(u < v)) continue;
      double x1 = u <= y1 ? (br.increasing() ? lo : hi) : br.inverse(u);
      double x2 = v >= y2 ? (br.increasing() ? hi : lo) : br.inverse(v);
      const double len = std::abs(x2 - x1) * static_cast<double>(n);
      if (len > 0.0) row[j] += len;
    }
  }
  // Bisection round-off is far below the row tolerance; rescale the residue.
  double total = 0.0;
  for (const auto& [j, v] : row) total += v;
  if (total > 0.0)
    for (auto& [j, v] : row) v /= total;
  return row;
}

template <class Fn>
void parallel_rows(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

// Maximal number of closed intervals sharing a point; touching endpoints count.
std::size_t closure_multiplicity(const std::vector<std::pair<double, double>>& intervals) {
  constexpr double tol = 1e-12;
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * intervals.size());
  for (const auto& [a, b] : intervals) {
    events.emplace_back(a, +1);
    events.emplace_back(b, -1);
  }
  std::sort(events.begin(), events.end());
  std::size_t best = 0;
  long open = 0;
  for (std::size_t k = 0; k < events.size();) {
    std::size_t end = k;
    while (end < events.size() && events[end].first - events[k].first <= tol) ++end;
    long closing = 0;
    for (std::size_t q = k; q < end; ++q) {
      if (events[q].second > 0)
        ++open;
      else
        ++closing;
    }
    best = std::max(best, static_cast<std::size_t>(open));
    open -= closing;
    k = end;
  }
  return best;
}

void check_ly_parameters(double p, double t, double alpha) {
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  if (!(t > 0.0 && t < std::min(alpha, 1.0 / p))) throw ParameterError("t must lie in (0, min(alpha, 1/p))");
}

}  // namespace

bool UlamOperator::exactly_row_stochastic() const {
  if (!exact) return false;
  for (const auto& row : exact_rows) {
    Rational s = 0;
    for (const auto& [j, v] : row) {
      if (v < 0) return false;
      s += v;
    }
    if (s != 1) return false;
  }
  return true;
}

double UlamOperator::row_sum_defect() const {
  return (matrix.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

UlamOperator ulam_matrix(const PiecewiseExpandingMap1D& map, std::size_t n_bins, const UlamOptions& options) {
  if (n_bins < 2) throw ParameterError("Ulam discretization needs at least 2 bins");
  UlamOperator op;
  op.n_bins = n_bins;
  const auto n = static_cast<Eigen::Index>(n_bins);
  op.matrix = MatrixXd::Zero(n, n);
  if (map.is_affine() && options.exact) {
    op.exact = true;
    op.exact_rows.resize(n_bins);
    parallel_rows(n_bins, options.threads, [&](std::size_t i) {
      op.exact_rows[i] = affine_row<Rational>(map, i, n_bins);
      for (const auto& [j, v] : op.exact_rows[i])
        op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(v);
    });
  } else if (map.is_affine()) {
    parallel_rows(n_bins, options.threads, [&](std::size_t i) {
      for (const auto& [j, v] : affine_row<double>(map, i, n_bins))
        op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    });
  } else {
    parallel_rows(n_bins, options.threads, [&](std::size_t i) {
      for (const auto& [j, v] : smooth_row(map, i, n_bins))
        op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    });
  }
  return op;
}

void write_ulam_csv(std::ostream& os, const UlamOperator& op) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os.precision(17);
  for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) os << (j ? "," : "") << "p" << j;
  os << '\n';
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) os << (j ? "," : "") << op.matrix(i, j);
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

CocycleGenerator random_ulam_cocycle(const RandomLYSystem& system, std::size_t n_bins, const UlamOptions& options) {
  validate(system);
  if (system.finite()) {
    std::vector<MatrixXd> table;
    table.reserve(system.table.size());
    for (const auto& m : system.table) table.push_back(ulam_matrix(m, n_bins, options).matrix.transpose());
    auto gen = CocycleGenerator::tabulated(std::move(table));
    return gen;
  }
  struct Memo {
    std::mutex mutex;
    std::map<std::pair<int, double>, MatrixXd> cache;
  };
  auto memo = std::make_shared<Memo>();
  UlamOptions fast = options;
  fast.exact = false;
  auto family = system.family;
  auto f = [memo, family, n_bins, fast](const BaseState& s) -> MatrixXd {
    const auto key = std::make_pair(s.symbol, s.phase);
    {
      std::lock_guard<std::mutex> lock(memo->mutex);
      auto it = memo->cache.find(key);
      if (it != memo->cache.end()) return it->second;
    }
    MatrixXd m = ulam_matrix(family(s), n_bins, fast).matrix.transpose();
    std::lock_guard<std::mutex> lock(memo->mutex);
    if (memo->cache.size() >= 4096) memo->cache.clear();
    memo->cache.emplace(key, m);
    return m;
  };
  return CocycleGenerator::callback(static_cast<Eigen::Index>(n_bins), f, "ulam");
}

ComplexityCounters complexity_counters(const std::vector<PiecewiseExpandingMap1D>& maps, std::size_t max_branches) {
  if (maps.empty()) throw ParameterError("complexity counters need at least one map");
  struct Node {
    std::size_t parent;
    const Branch* branch;
    double img_lo, img_hi, dmin, dmax;
  };
  std::vector<std::vector<Node>> levels(maps.size());
  for (const auto& b : maps[0].branches()) {
    const auto img = b.image();
    levels[0].push_back({0, &b, img.first, img.second, b.min_abs_derivative(), b.max_abs_derivative()});
  }
  constexpr double kMinLength = 1e-14;
  for (std::size_t k = 1; k < maps.size(); ++k) {
    for (std::size_t q = 0; q < levels[k - 1].size(); ++q) {
      const Node& node = levels[k - 1][q];
      for (const auto& b : maps[k].branches()) {
        const double lo = std::max(node.img_lo, b.lo_d()), hi = std::min(node.img_hi, b.hi_d());
        if (hi - lo <= kMinLength) continue;
        double y1 = b.value(lo), y2 = b.value(hi);
        if (y2 < y1) std::swap(y1, y2);
        levels[k].push_back({q, &b, y1, y2, node.dmin * b.min_abs_derivative(), node.dmax * b.max_abs_derivative()});
        if (levels[k].size() > max_branches)
          throw ParameterError("composition exceeds " + std::to_string(max_branches) + " branches");
      }
    }
  }
  // Domain endpoints: invert the image endpoints back through the chain.
  const auto& last = levels.back();
  std::vector<std::pair<double, double>> domains, images;
  domains.reserve(last.size());
  images.reserve(last.size());
  ComplexityCounters out;
  out.min_derivative = std::numeric_limits<double>::infinity();
  for (const auto& node : last) {
    double ya = node.img_lo, yb = node.img_hi;
    const Node* cur = &node;
    for (std::size_t k = levels.size(); k-- > 0;) {
      ya = cur->branch->inverse(ya);
      yb = cur->branch->inverse(yb);
      if (k > 0) cur = &levels[k - 1][cur->parent];
    }
    domains.emplace_back(std::min(ya, yb), std::max(ya, yb));
    images.emplace_back(node.img_lo, node.img_hi);
    out.min_derivative = std::min(out.min_derivative, node.dmin);
    out.max_derivative = std::max(out.max_derivative, node.dmax);
  }
  out.branches = last.size();
  out.c_b = closure_multiplicity(domains);
  out.c_e = closure_multiplicity(images);
  return out;
}

std::vector<PiecewiseExpandingMap1D> maps_along(const RandomLYSystem& system, const OrbitWindow& orbit,
                                                std::size_t n, std::ptrdiff_t start) {
  if (n == 0) throw ParameterError("need at least one map");
  orbit.require(start, start + static_cast<std::ptrdiff_t>(n) - 1);
  std::vector<PiecewiseExpandingMap1D> maps;
  maps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) maps.push_back(system.map_at(orbit.state(start + static_cast<std::ptrdiff_t>(k))));
  return maps;
}

double ly_bound_B(const RandomLYSystem& system, const OrbitWindow& orbit, std::size_t n, double p, double t,
                  double c_r, std::ptrdiff_t start) {
  check_ly_parameters(p, t, system.alpha);
  if (!(c_r >= 0.0)) throw ParameterError("C_R must be non-negative");
  const auto cc = complexity_counters(maps_along(system, orbit, n, start));
  return c_r * static_cast<double>(n) * std::pow(static_cast<double>(cc.c_b), 1.0 / p) *
         std::pow(static_cast<double>(cc.c_e), 1.0 - 1.0 / p) * std::pow(cc.min_derivative, 1.0 / p - 1.0 - t);
}

KappaStarBound kappa_star_bound(const RandomLYSystem& system, const OrbitWindow& orbit, std::size_t n, double p,
                                double t) {
  check_ly_parameters(p, t, system.alpha);
  const auto cc = complexity_counters(maps_along(system, orbit, n));
  const double nn = static_cast<double>(n);
  const double log_ce = std::log(static_cast<double>(cc.c_e)) / nn;
  const double log_chi = -std::log(cc.min_derivative) / nn;
  KappaStarBound out;
  out.value = (1.0 - 1.0 / p) * (log_ce + log_chi) + t * log_chi;
  out.c_e_star = std::exp(log_ce);
  out.chi = std::exp(log_chi);
  out.quasi_compact = out.value < 0.0;
  return out;
}

}  // namespace oseledets
