#include "oseledets/splitting.hpp"

#include "oseledets/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace oseledets {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Pushes the columns of q forward with a QR after every factor. The leading
// k columns of the result span the image of the leading k input columns.
MatrixXd push_frame(const CocycleGenerator& gen, const OrbitWindow& orbit, MatrixXd q, std::size_t n,
                    std::ptrdiff_t start) {
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(start, start + len - 1);
  const Index k = q.cols();
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const MatrixXd l = gen(orbit.state(start + i));
    const MatrixXd m = l * q;
    Eigen::HouseholderQR<MatrixXd> qr(m);
    const double scale = std::max(l.norm(), 1e-300);
    for (Index c = 0; c < k; ++c) {
      if (!(std::abs(qr.matrixQR()(c, c)) > 1e-13 * scale)) {
        std::ostringstream os;
        os << "push-forward lost rank at step " << i + 1 << " (column " << c + 1 << " of " << k << ")";
        throw CollapseError(os.str(), static_cast<std::size_t>(i + 1));
      }
    }
    q = qr.householderQ() * MatrixXd::Identity(m.rows(), k);
  }
  return q;
}

// sin-type separation: smallest singular value of (I - P_V) Q_Y.
double separation(const Subspace& y, const Subspace& v) {
  if (v.dim() == 0 || y.dim() == 0) return 1.0;
  const MatrixXd& qy = y.orthonormal();
  const MatrixXd& qv = v.orthonormal();
  const MatrixXd r = qy - qv * (qv.transpose() * qy);
  Eigen::JacobiSVD<MatrixXd> svd(r);
  return svd.singularValues()[svd.singularValues().size() - 1];
}

std::vector<std::size_t> schedule(const SplittingOptions& o) {
  if (o.n_start == 0) throw ParameterError("n_start must be positive");
  if (o.n_max < o.n_start) throw ParameterError("n_max must be at least n_start");
  std::vector<std::size_t> ns;
  for (std::size_t n = o.n_start; n <= o.n_max; n *= 2) ns.push_back(n);
  return ns;
}

struct PastData {
  FiltrationAt filtration;
  std::vector<Subspace> complements;  // U_1..U_L at sigma^{-n} omega
};

std::vector<Subspace> complements_for(const FiltrationAt& f, const SplittingOptions& o) {
  GoodComplement gc = good_complement(f.levels);
  std::vector<Subspace> u = gc.complements;
  if (o.alternative_complement_seed) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const Subspace& vp = f.levels[j + 1];
      if (vp.dim() == 0) continue;
      MatrixXd x = detail::normal_matrix(*o.alternative_complement_seed, 32 + j, vp.dim(), u[j].dim());
      x *= 0.5 / operator_norm(x, NormTag::l2);
      u[j] = Subspace(u[j].orthonormal() + vp.orthonormal() * x, u[j].norm());
    }
  }
  return u;
}

MatrixXd stacked_basis(const std::vector<Subspace>& parts, Index d, std::size_t count) {
  Index cols = 0;
  for (std::size_t j = 0; j < count; ++j) cols += parts[j].dim();
  MatrixXd b(d, cols);
  Index c = 0;
  for (std::size_t j = 0; j < count; ++j) {
    b.middleCols(c, parts[j].dim()) = parts[j].orthonormal();
    c += parts[j].dim();
  }
  return b;
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::tempered:
      return "tempered";
    case Verdict::not_tempered:
      return "not_tempered";
    case Verdict::inconclusive:
    default:
      return "inconclusive";
  }
}

Subspace pushforward_space(const CocycleGenerator& gen, const OrbitWindow& orbit, const Subspace& u, std::size_t n,
                           std::ptrdiff_t start) {
  if (u.ambient_dim() != gen.dim()) throw ParameterError("pushforward_space: dimension mismatch");
  if (n == 0 || u.dim() == 0) return u;
  const MatrixXd q = push_frame(gen, orbit, u.orthonormal(), n, start);
  if (u.norm() == NormTag::l2) return Subspace(q, NormTag::l2);
  return Subspace(nice_basis(Subspace(q, u.norm())), u.norm());
}

Subspace pushforward_space(const CocycleGenerator& gen, const OrbitWindow& orbit, const Subspace& u, std::size_t n) {
  return pushforward_space(gen, orbit, u, n, -static_cast<std::ptrdiff_t>(n));
}

void fit_decay_rate(ConvergenceReport& r, double floor) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < r.distances.size(); ++i)
    if (r.distances[i] > floor) {
      xs.push_back(static_cast<double>(r.n[i]));
      ys.push_back(std::log(r.distances[i]));
    }
  r.fit_points = xs.size();
  if (xs.size() < 2) {
    r.alpha_hat = kNaN;
    r.fit_residual = kNaN;
    return;
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    ss += e * e;
  }
  r.alpha_hat = -slope;
  r.fit_residual = std::sqrt(ss / m);
}

std::pair<std::ptrdiff_t, std::ptrdiff_t> splitting_window(const SplittingOptions& o) {
  const std::vector<std::size_t> ns = schedule(o);
  const auto h = static_cast<std::ptrdiff_t>(o.filtration_horizon);
  return {o.offset - static_cast<std::ptrdiff_t>(ns.back()), o.offset + h - 1};
}

SplittingResult compute_splitting(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                  const LyapunovSpectrum& spectrum, const SplittingOptions& options) {
  if (!(options.tol > 0.0)) throw ParameterError("tol must be positive");
  const std::vector<std::size_t> ns = schedule(options);
  const auto window = splitting_window(options);
  orbit.require(window.first, window.second);
  const Index d = gen.dim();
  const std::ptrdiff_t w = options.offset;

  FiltrationOptions fopt;
  fopt.levels = options.levels;
  const FiltrationAt here = filtration_at(gen, orbit, w, options.filtration_horizon, spectrum, fopt);
  const std::size_t n_levels = here.levels.size() - 1;

  SplittingResult out;
  out.offset = w;
  out.horizon = options.filtration_horizon;
  out.filtration = here.levels;
  out.remainder = here.levels.back();
  out.warnings = here.warnings;
  for (const auto& s : spectrum.warnings) out.warnings.push_back(s);
  for (std::size_t j = 0; j < n_levels; ++j) {
    out.multiplicities.push_back(spectrum.multiplicities[j]);
    out.exponents.push_back(spectrum.exponents[j]);
  }
  out.convergence.resize(n_levels);
  if (n_levels == 0) {
    out.converged = true;
    return out;
  }

  const std::vector<Subspace> u_here = complements_for(here, options);
  std::vector<std::vector<Subspace>> history(n_levels);

  for (std::size_t step = 0; step < ns.size(); ++step) {
    const std::size_t n = ns[step];
    const std::ptrdiff_t past = w - static_cast<std::ptrdiff_t>(n);
    const FiltrationAt f = filtration_at(gen, orbit, past, options.filtration_horizon, spectrum, fopt);
    const std::vector<Subspace> u = complements_for(f, options);
    const MatrixXd frame = stacked_basis(u, d, n_levels);

    MatrixXd pushed;
    try {
      pushed = push_frame(gen, orbit, frame, n, past);
    } catch (const CollapseError&) {
      MatrixXd perturbed = frame + 1e-6 * detail::normal_matrix(0xc011a95e, n, d, frame.cols());
      for (auto& c : out.convergence) ++c.retries;
      pushed = push_frame(gen, orbit, perturbed, n, past);
    }

    Index k = 0;
    for (std::size_t j = 0; j < n_levels; ++j) {
      k += u[j].dim();
      const Subspace image(pushed.leftCols(k), NormTag::l2);
      Subspace y = intersect(image, here.levels[j], out.multiplicities[j]);
      if (options.norm != NormTag::l2) y = y.with_norm(options.norm);
      ConvergenceReport& rep = out.convergence[j];
      const double sep = separation(y, here.levels[j + 1]);
      rep.transversality = std::isnan(rep.transversality) ? sep : std::min(rep.transversality, sep);

      if (options.measure_m && here.levels[j + 1].dim() > 0) {
        // g_n needs L^(n) u for u in U_j; only trustworthy while the faster
        // levels cannot amplify round-off beyond the signal.
        const double spread = spectrum.exponents.front() - spectrum.exponents[j];
        if (static_cast<double>(n) * spread <= 20.0) {
          const MatrixXd img = push_frame(gen, orbit, u[j].orthonormal(), n, past);
          std::vector<Subspace> rest;
          for (std::size_t i = 0; i < j; ++i) rest.push_back(u_here[i]);
          const Subspace u_minus = direct_sum(rest, d, NormTag::l2);
          const Framing fr{here.levels[j + 1], u_here[j], u_minus};
          const FramingProjections p = framing_projections(fr);
          const MatrixXd a = p.onto_v * img;
          const MatrixXd c = p.onto_u * img;
          const MatrixXd cpinv = c.completeOrthogonalDecomposition().pseudoInverse();
          const double g = operator_norm(MatrixXd(a * cpinv), NormTag::l2);
          rep.m_hat = std::isnan(rep.m_hat) ? g : std::max(rep.m_hat, g);
        }
      }
      history[j].push_back(std::move(y));
    }

    if (step > 0) {
      bool all_below = true;
      for (std::size_t j = 0; j < n_levels; ++j) {
        const auto& h = history[j];
        const double dist = grassmann_distance(h[h.size() - 2], h.back());
        ConvergenceReport& rep = out.convergence[j];
        rep.n.push_back(ns[step - 1]);
        rep.distances.push_back(dist);
        if (dist < options.tol && rep.stopping_n == 0) rep.stopping_n = ns[step - 1];
        if (!(dist < options.tol)) all_below = false;
      }
      if (options.stop_early && all_below) break;
    }
  }

  out.converged = true;
  for (std::size_t j = 0; j < n_levels; ++j) {
    ConvergenceReport& rep = out.convergence[j];
    rep.converged = !rep.distances.empty() && rep.distances.back() < options.tol;
    if (rep.stopping_n == 0 && !rep.n.empty()) rep.stopping_n = rep.n.back();
    fit_decay_rate(rep);
    out.converged = out.converged && rep.converged;
    out.spaces.push_back(history[j].back());
    const Subspace& vp = here.levels[j + 1];
    const Subspace y = history[j].back().with_norm(NormTag::l2);
    out.remainder_projection_norms.push_back(
        vp.dim() == 0 ? 0.0 : operator_norm(partial_projection(vp, y), options.norm));
    out.space_projection_norms.push_back(operator_norm(partial_projection(y, vp), options.norm));
  }
  if (!out.converged) out.warnings.push_back("splitting did not converge within n_max");
  return out;
}

EquivarianceReport check_equivariance(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                      const SplittingResult& here, const SplittingResult& next, double tol) {
  if (next.offset != here.offset + 1) throw ParameterError("check_equivariance: results must be one step apart");
  if (here.spaces.size() != next.spaces.size()) throw ParameterError("check_equivariance: level counts differ");
  EquivarianceReport rep;
  rep.tolerance = 10.0 * tol;
  rep.passed = true;
  for (std::size_t j = 0; j < here.spaces.size(); ++j) {
    const Subspace img = pushforward_space(gen, orbit, here.spaces[j], 1, here.offset);
    const double dist = grassmann_distance(img.with_norm(next.spaces[j].norm()), next.spaces[j]);
    rep.distances.push_back(dist);
    if (!(dist < rep.tolerance)) rep.passed = false;
  }
  return rep;
}

GrowthReport check_growth(const SplittingResult& result, const CocycleGenerator& gen, const OrbitWindow& orbit,
                          std::size_t n_check, std::optional<double> remainder_bound,
                          const LyapunovSpectrum* spectrum, std::uint64_t seed) {
  GrowthReport rep;
  rep.passed = true;
  const NormTag norm = result.spaces.empty() ? NormTag::l2 : result.spaces.front().norm();
  for (std::size_t j = 0; j < result.spaces.size(); ++j) {
    std::vector<double> errs;
    const MatrixXd basis = nice_basis(result.spaces[j]);
    for (Index c = 0; c < basis.cols(); ++c) {
      const double r = growth_rate(gen, orbit, basis.col(c), n_check, result.offset, norm);
      const double e = std::abs(r - result.exponents[j]);
      errs.push_back(e);
      if (!(e <= rep.level_tolerance)) rep.passed = false;
    }
    rep.level_errors.push_back(std::move(errs));
  }

  double bound = -30.0;
  if (remainder_bound) {
    bound = *remainder_bound;
  } else if (spectrum) {
    const std::size_t l = result.spaces.size();
    if (l < spectrum->exponents.size())
      bound = spectrum->exponents[l];
    else if (spectrum->kappa_bound)
      bound = *spectrum->kappa_bound;
  }
  rep.remainder_bound = bound;
  const Subspace& v = result.remainder;
  std::size_t n_rem = n_check;
  if (result.horizon > 0) n_rem = std::min(n_rem, result.horizon / 2);
  const double top = result.exponents.empty() ? bound : result.exponents.front();
  if (top - bound > 0.0) n_rem = static_cast<std::size_t>(std::min<double>(static_cast<double>(n_rem), 30.0 / (top - bound)));
  if (n_rem < 8) n_rem = 0;
  rep.remainder_n = n_rem;
  if (v.dim() > 0 && n_rem > 0) {
    for (int t = 0; t < 3; ++t) {
      const VectorXd coeff = detail::normal_matrix(seed, 48 + t, v.dim(), 1).col(0);
      const double r = growth_rate(gen, orbit, v.orthonormal() * coeff, n_rem, result.offset, norm);
      rep.remainder_rates.push_back(r);
      if (!(r <= bound + 0.1 || r == kNegInf)) rep.passed = false;
    }
  }
  return rep;
}

UniquenessReport uniqueness_probe(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                  const LyapunovSpectrum& spectrum, const SplittingOptions& options,
                                  std::uint64_t alternative_complement_seed) {
  SplittingOptions base = options;
  base.alternative_complement_seed.reset();
  SplittingOptions alt = options;
  alt.alternative_complement_seed = alternative_complement_seed;
  const SplittingResult a = compute_splitting(gen, orbit, spectrum, base);
  const SplittingResult b = compute_splitting(gen, orbit, spectrum, alt);
  UniquenessReport rep;
  rep.converged = a.converged && b.converged;
  if (!rep.converged) return rep;
  double dist = 0.0;
  for (std::size_t j = 0; j < a.spaces.size(); ++j) dist = std::max(dist, grassmann_distance(a.spaces[j], b.spaces[j]));
  rep.distance = dist;
  rep.passed = dist < 10.0 * options.tol;
  return rep;
}

TemperednessReport temperedness_test_log(const OffsetSeries& log_f, std::size_t n_max, double threshold) {
  if (n_max < 2) throw ParameterError("temperedness_test needs n_max >= 2");
  TemperednessReport rep;
  rep.threshold = threshold;
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n < n_max; n *= 2) ns.push_back(n);
  ns.push_back(n_max);
  rep.n = ns;

  auto side = [&](int sign, std::vector<double>& slopes) {
    double running = 0.0;
    std::size_t k = 0;
    for (std::size_t n : ns) {
      for (; k <= n; ++k) running = std::max(running, std::abs(log_f(sign * static_cast<std::ptrdiff_t>(k))));
      slopes.push_back(running / static_cast<double>(n));
    }
    const double last = slopes.back();
    const double prev = slopes[slopes.size() - 2];
    if (last < threshold) return Verdict::tempered;
    if (last >= 0.9 * prev) return Verdict::not_tempered;
    return Verdict::inconclusive;
  };
  rep.forward = side(+1, rep.forward_slope);
  rep.backward = side(-1, rep.backward_slope);
  if (rep.forward == Verdict::tempered && rep.backward == Verdict::tempered)
    rep.overall = Verdict::tempered;
  else if (rep.forward == Verdict::not_tempered || rep.backward == Verdict::not_tempered)
    rep.overall = Verdict::not_tempered;
  else
    rep.overall = Verdict::inconclusive;
  return rep;
}

TemperednessReport temperedness_test(const OffsetSeries& f, std::size_t n_max, double threshold) {
  return temperedness_test_log(
      [&](std::ptrdiff_t k) {
        const double v = f(k);
        if (!(v > 0.0)) throw ParameterError("temperedness_test needs a positive series");
        return std::log(v);
      },
      n_max, threshold);
}

}  // namespace oseledets
