#include "oseledets/experiment.hpp"

#include "oseledets/cocycle.hpp"
#include "oseledets/errors.hpp"
#include "oseledets/sobolev.hpp"
#include "oseledets/spectrum.hpp"
#include "oseledets/splitting.hpp"
#include "oseledets/transfer.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

namespace oseledets {

using nlohmann::json;

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(num(m(i, k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

// Runs one stage, records its wall-clock time and tags module errors.
template <class F>
auto stage(Report& report, const std::string& name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      report.timings[name] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
      auto r = f();
      report.timings[name] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what());
  }
}

void add_check(Report& r, std::string name, double value, double tolerance, bool passed) {
  r.checks.push_back({std::move(name), value, tolerance, passed});
}

void check_below(Report& r, std::string name, double value, double tolerance) {
  add_check(r, std::move(name), value, tolerance, value <= tolerance);
}

bool is_ly(const ExperimentConfig& c) { return c.generator.type == GeneratorSpec::Type::ly_system; }

std::size_t n_check(const AnalysisSpec& a) { return std::min<std::size_t>(a.n / 2, 200); }

CocycleGenerator build_generator(const ExperimentConfig& c) {
  if (is_ly(c)) {
    UlamOptions o;
    o.exact = c.generator.exact;
    return random_ulam_cocycle(c.generator.system, c.generator.n_bins, o);
  }
  if (c.generator.matrices.size() == 1) return CocycleGenerator::constant(c.generator.matrices.front());
  return CocycleGenerator::tabulated(c.generator.matrices);
}

LyapunovOptions spectrum_options(const ExperimentConfig& c, Eigen::Index dim) {
  LyapunovOptions o;
  o.gap_threshold = c.analysis.gap_threshold;
  o.count = static_cast<Eigen::Index>(c.analysis.count);
  if (is_ly(c)) {
    // Densities: l1 mass and a positive first frame column.
    o.norm = NormTag::l1;
    o.frame = StartFrame::positive_generic;
    o.frame_seed = c.seed;
    if (o.count == 0) o.count = std::min<Eigen::Index>(dim, 8);
  }
  return o;
}

SplittingOptions splitting_options(const ExperimentConfig& c) {
  SplittingOptions o;
  o.n_start = c.analysis.n_start;
  o.n_max = c.analysis.n_max;
  o.tol = c.analysis.tol;
  o.levels = c.analysis.levels;
  o.filtration_horizon = c.analysis.horizon;
  o.stop_early = !c.analysis.full_trace;
  return o;
}

json spectrum_json(const LyapunovSpectrum& s) {
  json j;
  j["exponents"] = nums(s.exponents);
  j["multiplicities"] = s.multiplicities;
  j["raw"] = nums(s.raw);
  j["kernel_dim"] = s.kernel_dim;
  j["n_used"] = s.n_used;
  j["gap_threshold"] = s.gap_threshold;
  j["degenerate"] = s.degenerate;
  j["truncated"] = s.truncated;
  j["warnings"] = s.warnings;
  return j;
}

Trace spectrum_trace(const LyapunovSpectrum& s) {
  Trace t{"trace_spectrum.csv", {"n"}, {}};
  const std::size_t k = s.history.empty() ? 0 : s.history.back().estimates.size();
  for (std::size_t i = 0; i < k; ++i) t.header.push_back("estimate_" + std::to_string(i + 1));
  for (const auto& p : s.history) {
    std::vector<double> row{static_cast<double>(p.n)};
    row.insert(row.end(), p.estimates.begin(), p.estimates.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

void spectrum_checks(Report& r, const ExperimentConfig& c, const LyapunovSpectrum& s) {
  if (is_ly(c)) check_below(r, "top_exponent_zero", std::abs(s.max_exponent()), 1e-6);
  const auto& e = c.expected.exponents;
  if (!e.empty()) {
    double worst = s.exponents.size() == e.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(e.size(), s.exponents.size()); ++i)
      worst = std::max(worst, std::abs(e[i] - s.exponents[i]));
    check_below(r, "exponents_match", worst, c.expected.exponent_tolerance);
  }
}

void run_spectrum(Report& r, const ExperimentConfig& c, const CocycleGenerator& gen, const OrbitWindow& orbit) {
  const LyapunovSpectrum s =
      stage(r, "spectrum", [&] { return lyapunov_exponents(gen, orbit, c.analysis.n, spectrum_options(c, gen.dim())); });
  r.results["spectrum"] = spectrum_json(s);
  r.traces.push_back(spectrum_trace(s));
  spectrum_checks(r, c, s);
  for (const auto& w : s.warnings) r.warnings.push_back(w);
}

void run_splitting(Report& r, const ExperimentConfig& c, const CocycleGenerator& gen, const OrbitWindow& orbit) {
  const LyapunovSpectrum s =
      stage(r, "spectrum", [&] { return lyapunov_exponents(gen, orbit, c.analysis.n, spectrum_options(c, gen.dim())); });
  r.results["spectrum"] = spectrum_json(s);
  spectrum_checks(r, c, s);

  SplittingOptions o = splitting_options(c);
  const SplittingResult here = stage(r, "splitting", [&] { return compute_splitting(gen, orbit, s, o); });
  SplittingOptions o1 = o;
  o1.offset = 1;
  o1.measure_m = false;
  const SplittingResult next = stage(r, "equivariance", [&] { return compute_splitting(gen, orbit, s, o1); });
  const EquivarianceReport eq = stage(r, "equivariance", [&] { return check_equivariance(gen, orbit, here, next, o.tol); });
  const GrowthReport gr =
      stage(r, "growth", [&] { return check_growth(here, gen, orbit, n_check(c.analysis), std::nullopt, &s, c.seed + 2); });
  const UniquenessReport un = stage(r, "uniqueness", [&] { return uniqueness_probe(gen, orbit, s, o, c.seed + 1); });

  json levels = json::array();
  Trace conv{"trace_convergence.csv", {"level", "n", "distance", "alpha_fit"}, {}};
  for (std::size_t j = 0; j < here.spaces.size(); ++j) {
    const ConvergenceReport& cr = here.convergence[j];
    json l;
    l["level"] = j + 1;
    l["exponent"] = num(here.exponents[j]);
    l["multiplicity"] = here.multiplicities[j];
    l["n"] = cr.n;
    l["distances"] = nums(cr.distances);
    l["alpha_hat"] = num(cr.alpha_hat);
    l["fit_residual"] = num(cr.fit_residual);
    l["fit_points"] = cr.fit_points;
    l["stopping_n"] = cr.stopping_n;
    l["converged"] = cr.converged;
    l["m_hat"] = num(cr.m_hat);
    l["transversality"] = num(cr.transversality);
    l["remainder_projection_norm"] = num(here.remainder_projection_norms[j]);
    l["space_projection_norm"] = num(here.space_projection_norms[j]);
    if (gen.dim() <= 16) l["basis"] = matrix_json(here.spaces[j].orthonormal());
    levels.push_back(std::move(l));
    for (std::size_t i = 0; i < cr.n.size(); ++i)
      conv.rows.push_back({static_cast<double>(j + 1), static_cast<double>(cr.n[i]), cr.distances[i], cr.alpha_hat});
    check_below(r, "level_" + std::to_string(j + 1) + "_cauchy",
                cr.distances.empty() ? std::numeric_limits<double>::infinity() : cr.distances.back(), o.tol);
  }
  r.results["splitting"] = {{"levels", levels},
                            {"remainder_dim", here.remainder.dim()},
                            {"converged", here.converged},
                            {"warnings", here.warnings}};
  r.results["equivariance"] = {{"distances", nums(eq.distances)}, {"tolerance", eq.tolerance}};
  r.results["uniqueness"] = {{"distance", num(un.distance)}, {"converged", un.converged}};
  r.traces.push_back(std::move(conv));
  double eq_worst = 0.0;
  for (double d : eq.distances) eq_worst = std::max(eq_worst, d);
  check_below(r, "equivariance", eq_worst, eq.tolerance);
  add_check(r, "uniqueness", un.distance, 10.0 * o.tol, un.passed);
  double growth_worst = 0.0;
  for (const auto& l : gr.level_errors)
    for (double e : l) growth_worst = std::max(growth_worst, e);
  add_check(r, "growth_rates", growth_worst, gr.level_tolerance, gr.passed);
  r.results["growth"] = {{"level_errors", gr.level_errors},
                         {"remainder_rates", nums(gr.remainder_rates)},
                         {"remainder_n", gr.remainder_n},
                         {"remainder_bound", num(gr.remainder_bound)}};
  if (here.remainder.dim() > 0 && gr.remainder_n == 0)
    r.warnings.push_back("remainder growth not measurable above rounding; only level rates were checked");

  const auto& expected = c.expected.spaces;
  if (!expected.empty()) {
    double worst = expected.size() == here.spaces.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < std::min(expected.size(), here.spaces.size()); ++j)
      worst = std::max(worst, grassmann_distance(here.spaces[j], Subspace(expected[j])));
    check_below(r, "expected_spaces", worst, c.expected.space_tolerance);
  }
  for (const auto& w : here.warnings) r.warnings.push_back(w);
}

void run_ulam(Report& r, const ExperimentConfig& c) {
  UlamOptions o;
  o.exact = c.generator.exact;
  json maps = json::array();
  for (std::size_t i = 0; i < c.generator.system.table.size(); ++i) {
    const auto& m = c.generator.system.table[i];
    const UlamOperator u = stage(r, "ulam", [&] { return ulam_matrix(m, c.generator.n_bins, o); });
    const std::string tag = std::to_string(i);
    maps.push_back({{"map", m.name()}, {"n_bins", u.n_bins}, {"exact", u.exact}, {"row_sum_defect", u.row_sum_defect()}});
    check_below(r, "row_sums_" + tag, u.row_sum_defect(), 1e-12);
    if (u.exact) add_check(r, "exact_row_stochastic_" + tag, u.exactly_row_stochastic() ? 1.0 : 0.0, 0.0, u.exactly_row_stochastic());
    Trace t{"trace_ulam_" + tag + ".csv", {}, {}};
    for (Eigen::Index j = 0; j < u.matrix.cols(); ++j) t.header.push_back("p" + std::to_string(j));
    for (Eigen::Index k = 0; k < u.matrix.rows(); ++k) {
      std::vector<double> row(static_cast<std::size_t>(u.matrix.cols()));
      for (Eigen::Index j = 0; j < u.matrix.cols(); ++j) row[static_cast<std::size_t>(j)] = u.matrix(k, j);
      t.rows.push_back(std::move(row));
    }
    r.traces.push_back(std::move(t));
  }
  r.results["ulam"] = maps;
}

void run_diagnose(Report& r, const ExperimentConfig& c, const OrbitWindow& orbit) {
  const auto& a = c.analysis;
  const auto& sys = c.generator.system;
  const ComplexityCounters cc =
      stage(r, "complexity", [&] { return complexity_counters(maps_along(sys, orbit, a.compose)); });
  const double b = stage(r, "ly_bound", [&] { return ly_bound_B(sys, orbit, a.compose, a.p, a.t, a.c_r); });
  const KappaStarBound k = stage(r, "kappa_star", [&] { return kappa_star_bound(sys, orbit, a.compose, a.p, a.t); });
  r.results["diagnose"] = {{"n", a.compose},
                           {"c_b", cc.c_b},
                           {"c_e", cc.c_e},
                           {"branches", cc.branches},
                           {"min_derivative", num(cc.min_derivative)},
                           {"max_derivative", num(cc.max_derivative)},
                           {"B", num(b)},
                           {"C_R", a.c_r},
                           {"kappa_star", num(k.value)},
                           {"c_e_star", num(k.c_e_star)},
                           {"chi", num(k.chi)},
                           {"quasi_compact", k.quasi_compact}};
  add_check(r, "c_b_equals_2", static_cast<double>(cc.c_b), 0.0, cc.c_b == 2);
  add_check(r, "quasi_compact", k.value, 0.0, k.value < 0.0);
  if (c.expected.kappa_star)
    check_below(r, "kappa_star_expected", std::abs(k.value - *c.expected.kappa_star), c.expected.kappa_tolerance);
}

void run_sobolev(Report& r, const ExperimentConfig& c) {
  const auto& a = c.analysis;
  const PiecewiseExpandingMap1D& t = c.generator.system.table.front();
  if (t.branch_count() != 2 || !t.is_affine())
    throw ConfigError("generator.maps[0]", "the slope-perturbation probe needs a full two-branch affine map");
  const Rational s = t.branches()[0].slope;
  std::vector<PiecewiseExpandingMap1D> family;
  std::vector<double> deltas;
  for (std::size_t k = 1; k <= a.perturbations; ++k) {
    const Rational delta(1, boost::multiprecision::cpp_int(1) << k);
    family.push_back(presets::full_two_branch(Rational(s + delta)));
    deltas.push_back(to_double(delta));
  }
  const Density f = [](double x) { return 1.0 + 0.5 * std::cos(2.0 * M_PI * x) + x * x; };
  const auto probe = stage(r, "continuity", [&] { return continuity_probe(t, family, f, a.p, a.t, a.grid); });
  Trace tr{"trace_probe.csv", {"k", "delta", "distance", "sobolev", "lp"}, {}};
  json pts = json::array();
  bool decreasing = true;
  double worst_step = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    tr.rows.push_back({static_cast<double>(i + 1), deltas[i], probe[i].distance, probe[i].sobolev, probe[i].lp});
    pts.push_back({{"k", i + 1}, {"delta", deltas[i]}, {"distance", num(probe[i].distance)},
                   {"sobolev", num(probe[i].sobolev)}, {"lp", num(probe[i].lp)}});
    if (i > 0) {
      worst_step = std::max(worst_step, probe[i].sobolev / probe[i - 1].sobolev);
      if (!(probe[i].sobolev < probe[i - 1].sobolev)) decreasing = false;
    }
  }
  r.traces.push_back(std::move(tr));
  r.results["sobolev"] = {{"t", a.t}, {"p", a.p}, {"grid", a.grid}, {"probe", pts}};
  if (probe.empty()) return;
  add_check(r, "strictly_decreasing", worst_step, 1.0, decreasing);
  const double ratio = probe.back().sobolev / probe.front().sobolev;
  add_check(r, "final_over_initial", ratio, a.ratio_target, ratio < a.ratio_target);
}

std::size_t past_needed(const ExperimentConfig& c) {
  if (c.analysis.kind != AnalysisKind::splitting) return 0;
  SplittingOptions o = splitting_options(c);
  o.offset = 1;
  const auto w = splitting_window(o);
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -w.first)) + 8;
}

std::size_t future_needed(const ExperimentConfig& c) {
  const auto& a = c.analysis;
  std::size_t f = a.n;
  if (a.kind == AnalysisKind::splitting) {
    SplittingOptions o = splitting_options(c);
    o.offset = 1;
    f = std::max({f, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, splitting_window(o).second)),
                  n_check(a) + 2});
  }
  if (a.kind == AnalysisKind::diagnose) f = std::max(f, a.compose);
  return f + 8;
}

}  // namespace

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

Report run(const ExperimentConfig& config) {
  Report r;
  r.name = config.name;
  r.kind = config.analysis.kind;
  r.config = config.source;
  r.results = json::object();
  const OrbitWindow orbit =
      stage(r, "orbit", [&] { return generate_orbit(config.driver, config.seed, past_needed(config), future_needed(config)); });
  switch (config.analysis.kind) {
    case AnalysisKind::spectrum: {
      const CocycleGenerator gen = stage(r, "generator", [&] { return build_generator(config); });
      run_spectrum(r, config, gen, orbit);
      break;
    }
    case AnalysisKind::splitting: {
      const CocycleGenerator gen = stage(r, "generator", [&] { return build_generator(config); });
      run_splitting(r, config, gen, orbit);
      break;
    }
    case AnalysisKind::ulam: run_ulam(r, config); break;
    case AnalysisKind::diagnose: run_diagnose(r, config, orbit); break;
    case AnalysisKind::sobolev: run_sobolev(r, config); break;
  }
  return r;
}

json to_json(const Report& r, bool with_timings) {
  json j;
  j["name"] = r.name;
  j["analysis"] = std::string(to_string(r.kind));
  j["config"] = r.config;
  j["results"] = r.results;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", num(c.value)}, {"tolerance", num(c.tolerance)}, {"passed", c.passed}});
  j["checks"] = checks;
  j["passed"] = r.passed();
  json traces = json::array();
  for (const auto& t : r.traces) traces.push_back(t.file);
  j["traces"] = traces;
  j["warnings"] = r.warnings;
  if (with_timings) {
    json t = json::object();
    for (const auto& [k, v] : r.timings) t[k] = v;
    j["timings"] = t;
  }
  return j;
}

std::string format_csv(const Trace& trace) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  for (std::size_t i = 0; i < trace.header.size(); ++i) os << (i ? "," : "") << trace.header[i];
  os << '\n';
  for (const auto& row : trace.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (std::isfinite(row[i]))
        os << row[i];
      else
        os << (std::isnan(row[i]) ? "nan" : (row[i] > 0 ? "inf" : "-inf"));
    }
    os << '\n';
  }
  return os.str();
}

void write_report(const Report& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream out(base / "report.json");
    if (!out) throw Error("cannot write " + (base / "report.json").string());
    out << to_json(report).dump(2) << '\n';
  }
  for (const auto& t : report.traces) {
    std::ofstream out(base / t.file);
    if (!out) throw Error("cannot write " + (base / t.file).string());
    out << format_csv(t);
  }
}

namespace {

struct Preset {
  const char* name;
  const char* description;
  const char* config;
};

// Raw JSON keeps the catalogue readable and round-trips through parse_config.
const Preset kPresets[] = {
    {"constant-2x2-eigen", "constant cocycle [[2,1],[0,1/2]]: exponents +-log 2, eigenvector splitting",
     R"({"name": "constant-2x2-eigen", "seed": 1,
         "driver": {"type": "cycle", "period": 1},
         "generator": {"type": "matrices", "matrices": [[[2, 1], [0, "1/2"]]]},
         "analysis": {"kind": "splitting", "n": 200, "n_max": 64, "tol": 1e-10, "horizon": 64},
         "expected": {"exponents": [0.6931471805599453, -0.6931471805599453], "exponent_tolerance": 1e-8,
                      "spaces": [[[1, 0]], [[2, -3]]], "space_tolerance": 1e-8}})"},
    {"constant-diag", "constant diagonal cocycle diag(2, 1/2)",
     R"({"name": "constant-diag", "seed": 1,
         "driver": {"type": "cycle", "period": 1},
         "generator": {"type": "matrices", "matrices": [[[2, 0], [0, "1/2"]]]},
         "analysis": {"kind": "spectrum", "n": 200},
         "expected": {"exponents": [0.6931471805599453, -0.6931471805599453], "exponent_tolerance": 1e-10}})"},
    {"period-2-matrices", "period-2 tabulated cocycle with non-invertible factors [[1,1],[0,0]] and [[1,0],[1,0]]",
     R"({"name": "period-2-matrices", "seed": 1,
         "driver": {"type": "cycle", "period": 2},
         "generator": {"type": "matrices", "matrices": [[[1, 1], [0, 0]], [[1, 0], [1, 0]]]},
         "analysis": {"kind": "splitting", "n": 200, "n_max": 64, "tol": 1e-8}})"},
    {"doubling-ulam-64", "Ulam cocycle of the doubling map on 64 bins: top exponent 0",
     R"({"name": "doubling-ulam-64", "seed": 1,
         "driver": {"type": "cycle", "period": 1},
         "generator": {"type": "ly_system", "maps": ["doubling"], "n_bins": 64},
         "analysis": {"kind": "spectrum", "n": 1000}})"},
    {"doubling", "doubling map: complexity counters and Lasota-Yorke bounds (p=2, t=1/4)",
     R"({"name": "doubling", "seed": 1,
         "driver": {"type": "cycle", "period": 1},
         "generator": {"type": "ly_system", "maps": ["doubling"], "n_bins": 64},
         "analysis": {"kind": "diagnose", "p": 2, "t": "1/4", "C_R": 1, "compose": 8},
         "expected": {"kappa_star": -0.17328679513998632, "kappa_tolerance": 1e-12}})"},
    {"tripling", "tripling map: complexity counters and Lasota-Yorke bounds (p=2, t=1/4)",
     R"({"name": "tripling", "seed": 1,
         "driver": {"type": "cycle", "period": 1},
         "generator": {"type": "ly_system", "maps": ["tripling"], "n_bins": 81},
         "analysis": {"kind": "diagnose", "p": 2, "t": "1/4", "C_R": 1, "compose": 6},
         "expected": {"kappa_star": -0.27465307216702745, "kappa_tolerance": 1e-12}})"},
    {"doubling-ulam-exact", "exact rational Ulam matrices of the doubling and tripling maps",
     R"({"name": "doubling-ulam-exact", "seed": 1,
         "driver": {"type": "cycle", "period": 2},
         "generator": {"type": "ly_system", "maps": ["doubling", "tripling"], "n_bins": 64, "exact": true},
         "analysis": {"kind": "ulam"}})"},
    {"buzzi_swap", "i.i.d. doubling-and-swap system on two intervals: exponent 0 with multiplicity 2",
     R"({"name": "buzzi_swap", "seed": 11,
         "generator": {"type": "ly_system", "system": "buzzi_swap", "n_bins": 256},
         "analysis": {"kind": "splitting", "n": 1000, "count": 6, "levels": 1, "n_max": 64, "tol": 1e-6}})"},
    {"bernoulli_mixture", "i.i.d. mixture of two affine two-interval Markov maps; Cauchy decay of the top space",
     R"({"name": "bernoulli_mixture", "seed": 3,
         "generator": {"type": "ly_system", "system": "bernoulli_mixture", "n_bins": 64},
         "analysis": {"kind": "splitting", "n": 1000, "count": 6, "levels": 1, "n_max": 256, "tol": 1e-6,
                      "full_trace": true}})"},
    {"random_slope", "full two-branch maps with slope 2 + phase driven by the golden rotation",
     R"({"name": "random_slope", "seed": 5,
         "driver": {"type": "rotation"},
         "generator": {"type": "ly_system", "system": "random_slope", "range": [2, 3], "n_bins": 64},
         "analysis": {"kind": "spectrum", "n": 500, "count": 4}})"},
    {"continuity-doubling", "transfer operators of slope perturbations 2 + 2^-k of the doubling map",
     R"({"name": "continuity-doubling", "seed": 1,
         "driver": {"type": "cycle", "period": 1},
         "generator": {"type": "ly_system", "maps": ["doubling"], "n_bins": 64},
         "analysis": {"kind": "sobolev", "p": 2, "t": "1/4", "grid": 1024, "perturbations": 10,
                      "ratio_target": 1e-3}})"},
};

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : kPresets) out.push_back({p.name, p.description});
  return out;
}

json preset_config(const std::string& name) {
  for (const auto& p : kPresets)
    if (name == p.name) return json::parse(p.config);
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

}  // namespace oseledets
