#include "oseledets/maps.hpp"

#include "oseledets/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace oseledets {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;
constexpr double kMapTol = 1e-12;

using boost::multiprecision::cpp_int;

cpp_int pow2(unsigned e) { return cpp_int(1) << e; }

cpp_int pow10(unsigned e) {
  cpp_int r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

cpp_int parse_integer(const std::string& s, const std::string& whole) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) throw ParameterError("malformed number '" + whole + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw ParameterError("malformed number '" + whole + "'");
  // A leading zero would make cpp_int read octal.
  std::size_t first = s.find_first_not_of('0', i);
  if (first == std::string::npos) return cpp_int(0);
  const cpp_int magnitude(s.substr(first));
  return i == 1 && s[0] == '-' ? cpp_int(-magnitude) : magnitude;
}

}  // namespace

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw ParameterError("cannot represent a non-finite value exactly");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double m = std::frexp(x, &exp);
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  Rational r{cpp_int(mant)};
  const int e = exp - 53;
  if (e >= 0)
    r *= Rational(pow2(static_cast<unsigned>(e)));
  else
    r /= Rational(pow2(static_cast<unsigned>(-e)));
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParameterError("empty number");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const cpp_int num = parse_integer(s.substr(0, slash), text);
    const cpp_int den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ParameterError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  // Decimal with optional exponent, converted exactly.
  std::string mant = s;
  long exponent = 0;
  const auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = s.substr(0, epos);
    const std::string es = s.substr(epos + 1);
    exponent = static_cast<long>(parse_integer(es, text));
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mant.size(); ++i) {
    const char c = mant[i];
    if (c == '.') {
      if (seen_point) throw ParameterError("malformed number '" + text + "'");
      seen_point = true;
    } else if ((c == '-' || c == '+') && i == 0) {
      digits.push_back(c);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw ParameterError("malformed number '" + text + "'");
    }
  }
  Rational r{parse_integer(digits, text)};
  const long scale = exponent - frac_digits;
  if (scale >= 0)
    r *= Rational(pow10(static_cast<unsigned>(scale)));
  else
    r /= Rational(pow10(static_cast<unsigned>(-scale)));
  return r;
}

std::string to_string(const Rational& r) { return r.str(); }

Branch Branch::affine(Rational lo, Rational hi, Rational slope, Rational intercept) {
  return Branch{std::move(lo), std::move(hi), std::move(slope), std::move(intercept), 0.0};
}

Branch Branch::smooth(Rational lo, Rational hi, Rational slope, Rational intercept, double rho) {
  return Branch{std::move(lo), std::move(hi), std::move(slope), std::move(intercept), rho};
}

double Branch::value(double x) const {
  return to_double(slope) * x + to_double(intercept) + (rho != 0.0 ? rho * std::sin(kTwoPi * x) : 0.0);
}

double Branch::derivative(double x) const {
  return to_double(slope) + (rho != 0.0 ? kTwoPi * rho * std::cos(kTwoPi * x) : 0.0);
}

double Branch::second_derivative(double x) const {
  return rho != 0.0 ? -kTwoPi * kTwoPi * rho * std::sin(kTwoPi * x) : 0.0;
}

double Branch::min_abs_derivative() const { return std::abs(to_double(slope)) - kTwoPi * std::abs(rho); }

double Branch::max_abs_derivative() const { return std::abs(to_double(slope)) + kTwoPi * std::abs(rho); }

std::pair<double, double> Branch::image() const {
  const double a = value(lo_d());
  const double b = value(hi_d());
  return {std::min(a, b), std::max(a, b)};
}

std::pair<Rational, Rational> Branch::image_exact() const {
  if (!is_affine()) throw UnsupportedFormError("exact image needs an affine branch");
  Rational a = slope * lo + intercept;
  Rational b = slope * hi + intercept;
  if (b < a) std::swap(a, b);
  return {a, b};
}

double Branch::inverse(double y) const {
  if (is_affine()) return (y - to_double(intercept)) / to_double(slope);
  double a = lo_d(), b = hi_d();
  const bool inc = derivative(0.5 * (a + b)) > 0.0;
  for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
    const double m = 0.5 * (a + b);
    const bool below = value(m) < y;
    if (below == inc)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

PiecewiseExpandingMap1D::PiecewiseExpandingMap1D(std::vector<Branch> branches, std::string name)
    : branches_(std::move(branches)), name_(std::move(name)) {
  if (branches_.empty()) throw ParameterError("a piecewise expanding map needs at least one branch");
  std::vector<std::size_t> order(branches_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return branches_[a].lo < branches_[b].lo; });
  Rational total = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Branch& br = branches_[order[k]];
    const std::string tag = "branch " + std::to_string(order[k]);
    if (!(br.lo < br.hi)) throw ParameterError(tag + " has an empty domain");
    if (br.lo < 0 || br.hi > 1) throw ParameterError(tag + " leaves [0,1]");
    if (k + 1 < order.size() && br.hi > branches_[order[k + 1]].lo)
      throw ParameterError(tag + " overlaps the next branch");
    total += br.hi - br.lo;
    if (!(br.min_abs_derivative() > 1.0)) {
      std::ostringstream os;
      os << tag << " is not expanding (|T'| >= " << br.min_abs_derivative() << ")";
      throw ParameterError(os.str());
    }
    const auto img = br.image();
    if (img.first < -kMapTol || img.second > 1.0 + kMapTol) throw ParameterError(tag + " maps outside [0,1]");
  }
  if (std::abs(to_double(total) - 1.0) > kMapTol) throw ParameterError("branch domains do not cover [0,1]");
}

bool PiecewiseExpandingMap1D::is_affine() const {
  return std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) { return b.is_affine(); });
}

double PiecewiseExpandingMap1D::operator()(double x) const {
  for (const auto& b : branches_)
    if (x >= b.lo_d() && x < b.hi_d()) return b.value(x);
  for (const auto& b : branches_)
    if (x == b.hi_d()) return b.value(x);
  throw RangeError("point outside every branch domain");
}

double PiecewiseExpandingMap1D::min_expansion() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : branches_) m = std::min(m, b.min_abs_derivative());
  return m;
}

double PiecewiseExpandingMap1D::holder_bound(double alpha) const {
  double best = 0.0;
  for (const auto& b : branches_) {
    const double sup = std::max(std::abs(b.value(b.lo_d())), std::abs(b.value(b.hi_d())));
    const double len = b.hi_d() - b.lo_d();
    const double holder = kTwoPi * kTwoPi * std::abs(b.rho) * std::pow(len, 1.0 - alpha);
    best = std::max(best, sup + b.max_abs_derivative() + holder);
  }
  return best;
}

PiecewiseExpandingMap1D RandomLYSystem::map_at(const BaseState& s) const {
  if (!table.empty()) {
    if (s.symbol < 0 || static_cast<std::size_t>(s.symbol) >= table.size())
      throw ParameterError("symbol " + std::to_string(s.symbol) + " has no map");
    return table[static_cast<std::size_t>(s.symbol)];
  }
  if (family) return family(s);
  throw ParameterError("random system has neither a map table nor a family");
}

void validate(const RandomLYSystem& system) {
  validate(system.driver);
  if (!(system.alpha > 0.0 && system.alpha <= 1.0)) throw ParameterError("alpha must lie in (0,1]");
  if (system.table.empty()) {
    if (!system.family) throw ParameterError("random system needs a map table or a family");
    return;
  }
  const int alphabet = alphabet_size(system.driver);
  if (alphabet <= 0) throw ParameterError("a map table needs a driver with a finite alphabet");
  if (static_cast<std::size_t>(alphabet) > system.table.size())
    throw ParameterError("map table has " + std::to_string(system.table.size()) + " entries, driver alphabet " +
                         std::to_string(alphabet));
}

namespace presets {

namespace {
Rational q(long a, long b = 1) { return Rational(a, b); }
}  // namespace

PiecewiseExpandingMap1D doubling() {
  return PiecewiseExpandingMap1D({Branch::affine(q(0), q(1, 2), q(2), q(0)), Branch::affine(q(1, 2), q(1), q(2), q(-1))},
                                 "doubling");
}

PiecewiseExpandingMap1D tripling() {
  return PiecewiseExpandingMap1D({Branch::affine(q(0), q(1, 3), q(3), q(0)),
                                  Branch::affine(q(1, 3), q(2, 3), q(3), q(-1)),
                                  Branch::affine(q(2, 3), q(1), q(3), q(-2))},
                                 "tripling");
}

PiecewiseExpandingMap1D buzzi_keep() {
  return PiecewiseExpandingMap1D({Branch::affine(q(0), q(1, 4), q(2), q(0)),
                                  Branch::affine(q(1, 4), q(1, 2), q(2), q(-1, 2)),
                                  Branch::affine(q(1, 2), q(3, 4), q(2), q(-1, 2)),
                                  Branch::affine(q(3, 4), q(1), q(2), q(-1))},
                                 "buzzi_keep");
}

PiecewiseExpandingMap1D buzzi_swap() {
  return PiecewiseExpandingMap1D({Branch::affine(q(0), q(1, 4), q(2), q(1, 2)),
                                  Branch::affine(q(1, 4), q(1, 2), q(2), q(0)),
                                  Branch::affine(q(1, 2), q(3, 4), q(2), q(-1)),
                                  Branch::affine(q(3, 4), q(1), q(2), q(-3, 2))},
                                 "buzzi_swap");
}

PiecewiseExpandingMap1D full_two_branch(const Rational& s) {
  if (!(s > 1)) throw ParameterError("full two-branch map needs slope > 1");
  const Rational b = 1 / s;
  const Rational s2 = s / (s - 1);
  return PiecewiseExpandingMap1D({Branch::affine(q(0), b, s, q(0)), Branch::affine(b, q(1), s2, -s2 * b)},
                                 "full_two_branch");
}

PiecewiseExpandingMap1D two_interval_markov(long a, long b, const std::string& name) {
  std::vector<Branch> br;
  for (long k = 0; k < a; ++k)
    br.push_back(Branch::affine(q(k, 2 * a), q(k + 1, 2 * a), q(a), k < a - 1 ? q(-k, 2) : Rational(q(1, 2) - q(k, 2))));
  for (long k = 0; k < b; ++k) {
    const Rational lo = q(1, 2) + q(k, 2 * b);
    br.push_back(Branch::affine(lo, Rational(lo + q(1, 2 * b)), q(b), k < b - 1 ? Rational(q(1, 2) - q(b) * lo) : Rational(-q(b) * lo)));
  }
  return PiecewiseExpandingMap1D(std::move(br), name);
}

PiecewiseExpandingMap1D mixture_a() { return two_interval_markov(10, 8, "mixture_a"); }

PiecewiseExpandingMap1D mixture_b() { return two_interval_markov(8, 10, "mixture_b"); }

PiecewiseExpandingMap1D partial_two_branch(const Rational& delta) {
  return PiecewiseExpandingMap1D({Branch::affine(q(0), q(2, 5), q(2) + delta, q(0)),
                                  Branch::affine(q(2, 5), q(1), q(3, 2), q(-3, 5))},
                                 "partial_two_branch");
}

PiecewiseExpandingMap1D smooth_doubling(double rho) {
  return PiecewiseExpandingMap1D({Branch::smooth(q(0), q(1, 2), q(2), q(0), rho),
                                  Branch::smooth(q(1, 2), q(1), q(2), q(-1), rho)},
                                 "smooth_doubling");
}

RandomLYSystem constant_system(const PiecewiseExpandingMap1D& map) {
  RandomLYSystem s;
  s.driver = FiniteCycle{1, 0};
  s.table = {map};
  s.name = map.name();
  return s;
}

RandomLYSystem buzzi_swap_system() {
  RandomLYSystem s;
  s.driver = BernoulliShift{{0.5, 0.5}};
  s.table = {buzzi_keep(), buzzi_swap()};
  s.name = "buzzi_swap";
  return s;
}

RandomLYSystem bernoulli_mixture_system(double p) {
  RandomLYSystem s;
  s.driver = BernoulliShift{{p, 1.0 - p}};
  s.table = {mixture_a(), mixture_b()};
  s.name = "bernoulli_mixture";
  return s;
}

RandomLYSystem random_slope_system(double lo, double hi, double angle) {
  if (!(lo > 1.0 && hi >= lo)) throw ParameterError("random slope range must satisfy 1 < lo <= hi");
  RandomLYSystem s;
  s.driver = IrrationalRotation{angle, -1.0};
  s.family = [lo, hi](const BaseState& st) { return full_two_branch(to_rational(lo + (hi - lo) * st.phase)); };
  s.name = "random_slope";
  return s;
}

RandomLYSystem alternating_system(const PiecewiseExpandingMap1D& a, const PiecewiseExpandingMap1D& b) {
  RandomLYSystem s;
  s.driver = FiniteCycle{2, 0};
  s.table = {a, b};
  s.name = a.name() + "/" + b.name();
  return s;
}

}  // namespace presets

}  // namespace oseledets
