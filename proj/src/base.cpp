#include "oseledets/base.hpp"

#include "oseledets/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace oseledets {

namespace {

constexpr double kStochasticTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability_vector(const Eigen::Ref<const Eigen::VectorXd>& p, const std::string& what) {
  if (p.size() == 0) throw ParameterError(what + " is empty");
  if ((p.array() < 0.0).any()) throw ParameterError(what + " has negative entries");
  if (std::abs(p.sum() - 1.0) > kStochasticTol) {
    std::ostringstream os;
    os << what << " sums to " << p.sum() << ", expected 1";
    throw ParameterError(os.str());
  }
}

// Inverse-CDF draw from a probability vector.
int draw(const Eigen::Ref<const Eigen::VectorXd>& p, double u) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  // u lands in the rounding slack above the last cumulative sum
  for (Eigen::Index i = p.size() - 1; i >= 0; --i)
    if (p[i] > 0.0) return static_cast<int>(i);
  return 0;
}

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

namespace detail {

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::int64_t offset) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ (stream * 0xd6e8feb86659fd93ULL));
  h = splitmix(h ^ static_cast<std::uint64_t>(offset));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double normal_at(std::uint64_t seed, std::uint64_t stream, std::int64_t index) {
  const double u1 = 1.0 - uniform_at(seed, stream, 2 * index);
  const double u2 = uniform_at(seed, stream, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::MatrixXd normal_matrix(std::uint64_t seed, std::uint64_t stream, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal_at(seed, stream, j * rows + i);
  return m;
}

}  // namespace detail

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
  const Eigen::Index m = transition.rows();
  // pi^T (P - I) = 0 together with sum(pi) = 1, solved in the least-squares sense.
  Eigen::MatrixXd system(m + 1, m);
  system.topRows(m) = transition.transpose() - Eigen::MatrixXd::Identity(m, m);
  system.row(m).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs[m] = 1.0;
  Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

void validate(const Driver& driver) {
  std::visit(overloaded{
                 [](const FiniteCycle& d) {
                   if (d.period < 1) throw ParameterError("finite cycle period must be >= 1");
                   if (d.initial < 0 || d.initial >= d.period)
                     throw ParameterError("finite cycle initial state out of range");
                 },
                 [](const IrrationalRotation& d) {
                   if (!(d.angle >= 0.0 && d.angle < 1.0))
                     throw ParameterError("rotation angle must lie in [0,1)");
                   if (d.initial_phase >= 1.0) throw ParameterError("initial phase must lie in [0,1)");
                 },
                 [](const BernoulliShift& d) {
                   Eigen::Map<const Eigen::VectorXd> p(d.probabilities.data(),
                                                       static_cast<Eigen::Index>(d.probabilities.size()));
                   check_probability_vector(p, "Bernoulli probability vector");
                 },
                 [](const MarkovShift& d) {
                   if (d.transition.rows() == 0 || d.transition.rows() != d.transition.cols())
                     throw ParameterError("Markov transition matrix must be square and non-empty");
                   for (Eigen::Index i = 0; i < d.transition.rows(); ++i)
                     check_probability_vector(d.transition.row(i).transpose(),
                                              "Markov transition row " + std::to_string(i));
                   if (d.initial.size() != 0) {
                     if (d.initial.size() != d.transition.rows())
                       throw ParameterError("Markov initial distribution has wrong length");
                     check_probability_vector(d.initial, "Markov initial distribution");
                   }
                 },
             },
             driver);
}

std::string driver_name(const Driver& driver) {
  return std::visit(overloaded{
                        [](const FiniteCycle&) { return std::string("finite_cycle"); },
                        [](const IrrationalRotation&) { return std::string("rotation"); },
                        [](const BernoulliShift&) { return std::string("bernoulli"); },
                        [](const MarkovShift&) { return std::string("markov"); },
                    },
                    driver);
}

bool is_deterministic(const Driver& driver) {
  return std::holds_alternative<FiniteCycle>(driver) || std::holds_alternative<IrrationalRotation>(driver);
}

int alphabet_size(const Driver& driver) {
  return std::visit(overloaded{
                        [](const FiniteCycle& d) { return d.period; },
                        [](const IrrationalRotation&) { return 0; },
                        [](const BernoulliShift& d) { return static_cast<int>(d.probabilities.size()); },
                        [](const MarkovShift& d) { return static_cast<int>(d.transition.rows()); },
                    },
                    driver);
}

BaseState driver_step(const Driver& driver, const BaseState& state) {
  if (const auto* c = std::get_if<FiniteCycle>(&driver)) return {(state.symbol + 1) % c->period, 0.0};
  if (const auto* r = std::get_if<IrrationalRotation>(&driver)) return {0, frac(state.phase + r->angle)};
  throw ParameterError("driver_step is only defined for deterministic drivers");
}

OrbitWindow::OrbitWindow(Driver driver, std::uint64_t seed,
                         std::shared_ptr<const std::vector<BaseState>> states, std::ptrdiff_t origin)
    : driver_(std::move(driver)), seed_(seed), states_(std::move(states)), origin_(origin) {}

bool OrbitWindow::contains(std::ptrdiff_t n) const noexcept {
  return n >= first_offset() && n <= last_offset();
}

const BaseState& OrbitWindow::state(std::ptrdiff_t n) const {
  if (!contains(n)) {
    std::ostringstream os;
    os << "offset " << n << " outside orbit window [" << first_offset() << ", " << last_offset() << "]";
    throw RangeError(os.str());
  }
  return (*states_)[static_cast<std::size_t>(n + origin_)];
}

void OrbitWindow::require(std::ptrdiff_t first, std::ptrdiff_t last) const {
  if (first > last) return;
  if (!contains(first) || !contains(last)) {
    std::ostringstream os;
    os << "offsets [" << first << ", " << last << "] not inside orbit window [" << first_offset() << ", "
       << last_offset() << "]";
    throw RangeError(os.str());
  }
}

OrbitWindow generate_orbit(const Driver& driver, std::uint64_t seed, std::size_t n_past,
                           std::size_t n_future) {
  validate(driver);
  const auto past = static_cast<std::ptrdiff_t>(n_past);
  const auto future = static_cast<std::ptrdiff_t>(n_future);
  auto states = std::make_shared<std::vector<BaseState>>(n_past + n_future + 1);
  auto at = [&](std::ptrdiff_t n) -> BaseState& { return (*states)[static_cast<std::size_t>(n + past)]; };

  std::visit(overloaded{
                 [&](const FiniteCycle& d) {
                   for (std::ptrdiff_t n = -past; n <= future; ++n) {
                     const auto r = ((d.initial + n) % d.period + d.period) % d.period;
                     at(n) = {static_cast<int>(r), 0.0};
                   }
                 },
                 [&](const IrrationalRotation& d) {
                   const double x0 = d.initial_phase >= 0.0 ? d.initial_phase : detail::uniform_at(seed, 0, 0);
                   // Accumulating the angle step by step keeps driver_step(state(n)) == state(n+1) exact.
                   at(0) = {0, x0};
                   for (std::ptrdiff_t n = 1; n <= future; ++n) at(n) = {0, frac(at(n - 1).phase + d.angle)};
                   for (std::ptrdiff_t n = -1; n >= -past; --n) {
                     double x = at(n + 1).phase - d.angle;
                     if (x < 0.0) x += 1.0;
                     if (x >= 1.0) x -= 1.0;
                     at(n) = {0, x};
                   }
                 },
                 [&](const BernoulliShift& d) {
                   Eigen::Map<const Eigen::VectorXd> p(d.probabilities.data(),
                                                       static_cast<Eigen::Index>(d.probabilities.size()));
                   for (std::ptrdiff_t n = -past; n <= future; ++n)
                     at(n) = {draw(p, detail::uniform_at(seed, 1, n)), 0.0};
                 },
                 [&](const MarkovShift& d) {
                   const Eigen::VectorXd pi = stationary_distribution(d.transition);
                   const Eigen::VectorXd& start = d.initial.size() ? d.initial : pi;
                   at(0) = {draw(start, detail::uniform_at(seed, 2, 0)), 0.0};
                   for (std::ptrdiff_t n = 1; n <= future; ++n) {
                     const Eigen::VectorXd row = d.transition.row(at(n - 1).symbol).transpose();
                     at(n) = {draw(row, detail::uniform_at(seed, 3, n)), 0.0};
                   }
                   // Time reversal: Q(i,j) = pi_j P(j,i) / pi_i.
                   for (std::ptrdiff_t n = -1; n >= -past; --n) {
                     const int i = at(n + 1).symbol;
                     Eigen::VectorXd row = pi.cwiseProduct(d.transition.col(i));
                     const double mass = row.sum();
                     if (mass <= 0.0) throw ParameterError("Markov state unreachable under the stationary law");
                     row /= mass;
                     at(n) = {draw(row, detail::uniform_at(seed, 4, n)), 0.0};
                   }
                 },
             },
             driver);
  return OrbitWindow(driver, seed, std::move(states), past);
}

OrbitWindow shift_view(const OrbitWindow& orbit, std::ptrdiff_t k) {
  if (!orbit.contains(k)) {
    std::ostringstream os;
    os << "shift by " << k << " leaves orbit window [" << orbit.first_offset() << ", " << orbit.last_offset()
       << "]";
    throw RangeError(os.str());
  }
  return OrbitWindow(orbit.driver_, orbit.seed_, orbit.states_, orbit.origin_ + k);
}

double birkhoff_average(const OrbitWindow& orbit, const Observable& f, std::size_t n, Direction direction) {
  if (n == 0) throw ParameterError("Birkhoff average needs n >= 1");
  const auto len = static_cast<std::ptrdiff_t>(n);
  if (direction == Direction::forward)
    orbit.require(0, len - 1);
  else
    orbit.require(-(len - 1), 0);
  double sum = 0.0;
  for (std::ptrdiff_t i = 0; i < len; ++i) sum += f(orbit.state(direction == Direction::forward ? i : -i));
  return sum / static_cast<double>(n);
}

}  // namespace oseledets
