#include "oseledets/config.hpp"

#include "oseledets/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace oseledets {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Rational rational_value(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) return to_rational(v.get<double>());
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected a number or a \"num/den\" string");
}

double number_value(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  return to_double(rational_value(v, path));
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number_value(obj.at(key), join(path, key));
}

std::size_t count(const json& obj, const std::string& key, const std::string& path, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(join(path, key), "expected a non-negative integer");
  return v.get<std::size_t>();
}

bool flag(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return obj.at(key).get<bool>();
}

std::string text(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(join(path, key), "expected a string");
  return obj.at(key).get<std::string>();
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(join(path, key), "missing field");
  return obj.at(key);
}

Eigen::MatrixXd matrix_value(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty() || !v.front().is_array()) throw ConfigError(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rp = index_path(path, static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError(rp, "ragged matrix row");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = number_value(row[static_cast<std::size_t>(k)], index_path(rp, static_cast<std::size_t>(k)));
  }
  return m;
}

Eigen::VectorXd vector_value(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number_value(v[i], index_path(path, i));
  return out;
}

Driver parse_driver(const json& j, const std::string& path) {
  const std::string type = text(j, "type", path, "");
  Driver d;
  if (type == "cycle") {
    d = FiniteCycle{static_cast<int>(count(j, "period", path, 1)), static_cast<int>(count(j, "initial", path, 0))};
  } else if (type == "rotation") {
    d = IrrationalRotation{number(j, "angle", path, kGoldenAngle), number(j, "phase", path, -1.0)};
  } else if (type == "bernoulli") {
    const Eigen::VectorXd p = vector_value(member(j, "p", path), join(path, "p"));
    d = BernoulliShift{std::vector<double>(p.data(), p.data() + p.size())};
  } else if (type == "markov") {
    MarkovShift m;
    m.transition = matrix_value(member(j, "transition", path), join(path, "transition"));
    if (j.contains("initial")) m.initial = vector_value(j.at("initial"), join(path, "initial"));
    d = m;
  } else {
    throw ConfigError(join(path, "type"), "unknown driver type '" + type + "'");
  }
  try {
    validate(d);
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
  return d;
}

RandomLYSystem system_preset(const std::string& name, const json& j, const std::string& path) {
  if (name == "buzzi_swap") return presets::buzzi_swap_system();
  if (name == "bernoulli_mixture") return presets::bernoulli_mixture_system(number(j, "p", path, 0.5));
  if (name == "random_slope") {
    const json& range = member(j, "range", path);
    if (!range.is_array() || range.size() != 2) throw ConfigError(join(path, "range"), "expected [lo, hi]");
    try {
      return presets::random_slope_system(number_value(range[0], join(path, "range[0]")),
                                          number_value(range[1], join(path, "range[1]")),
                                          number(j, "angle", path, kGoldenAngle));
    } catch (const ParameterError& e) {
      throw ConfigError(join(path, "range"), e.what());
    }
  }
  throw ConfigError(join(path, "system"), "unknown system preset '" + name + "'");
}

GeneratorSpec parse_generator(const json& j, const std::string& path, Driver& driver, bool driver_given) {
  GeneratorSpec g;
  const std::string type = text(j, "type", path, "");
  if (type == "matrices") {
    g.type = GeneratorSpec::Type::matrices;
    const json& ms = member(j, "matrices", path);
    if (!ms.is_array() || ms.empty()) throw ConfigError(join(path, "matrices"), "expected a non-empty list");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string mp = index_path(join(path, "matrices"), i);
      Eigen::MatrixXd m = matrix_value(ms[i], mp);
      if (m.rows() != m.cols()) throw ConfigError(mp, "matrix is not square");
      if (!g.matrices.empty() && m.rows() != g.matrices.front().rows()) throw ConfigError(mp, "dimension mismatch");
      g.matrices.push_back(std::move(m));
    }
    const int alphabet = alphabet_size(driver);
    if (alphabet <= 0) throw ConfigError("driver", "a matrix table needs a driver with a finite alphabet");
    if (static_cast<std::size_t>(alphabet) > g.matrices.size())
      throw ConfigError(join(path, "matrices"), "fewer matrices than driver symbols");
    return g;
  }
  if (type != "ly_system") throw ConfigError(join(path, "type"), "unknown generator type '" + type + "'");
  g.type = GeneratorSpec::Type::ly_system;
  g.n_bins = count(j, "n_bins", path, 64);
  if (g.n_bins < 2) throw ConfigError(join(path, "n_bins"), "need at least 2 bins");
  g.exact = flag(j, "exact", path, true);
  if (j.contains("system")) {
    g.system = system_preset(text(j, "system", path, ""), j, path);
    if (driver_given)
      g.system.driver = driver;
    else
      driver = g.system.driver;
  } else if (j.contains("maps")) {
    const json& ms = j.at("maps");
    if (!ms.is_array() || ms.empty()) throw ConfigError(join(path, "maps"), "expected a non-empty list");
    for (std::size_t i = 0; i < ms.size(); ++i) g.system.table.push_back(parse_map(ms[i], index_path(join(path, "maps"), i)));
    g.system.driver = driver;
    g.system.name = text(j, "name", path, g.system.table.front().name());
  } else {
    throw ConfigError(join(path, "maps"), "missing field (or give \"system\")");
  }
  g.system.alpha = number(j, "alpha", path, g.system.alpha);
  try {
    validate(g.system);
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
  return g;
}

AnalysisSpec parse_analysis(const json& j, const std::string& path, double alpha) {
  AnalysisSpec a;
  a.kind = analysis_kind_from_string(text(j, "kind", path, "spectrum"));
  a.n = count(j, "n", path, a.n);
  if (a.n < 10) throw ConfigError(join(path, "n"), "need n >= 10");
  a.gap_threshold = number(j, "gap_threshold", path, a.gap_threshold);
  if (!(a.gap_threshold > 0.0)) throw ConfigError(join(path, "gap_threshold"), "must be positive");
  a.count = count(j, "count", path, a.count);
  a.n_start = count(j, "n_start", path, a.n_start);
  a.n_max = count(j, "n_max", path, a.n_max);
  if (a.n_start < 1 || a.n_max < a.n_start) throw ConfigError(join(path, "n_max"), "need 1 <= n_start <= n_max");
  a.tol = number(j, "tol", path, a.tol);
  if (!(a.tol > 0.0)) throw ConfigError(join(path, "tol"), "must be positive");
  a.levels = count(j, "levels", path, a.levels);
  a.horizon = count(j, "horizon", path, a.horizon);
  if (a.horizon < 1) throw ConfigError(join(path, "horizon"), "must be positive");
  a.full_trace = flag(j, "full_trace", path, a.full_trace);
  a.p = number(j, "p", path, a.p);
  if (!(a.p > 1.0)) throw ConfigError(join(path, "p"), "must exceed 1");
  a.t = number(j, "t", path, a.t);
  if (a.kind == AnalysisKind::diagnose && !(a.t > 0.0 && a.t < std::min(alpha, 1.0 / a.p)))
    throw ConfigError(join(path, "t"), "must lie in (0, min(alpha, 1/p))");
  if (!(a.t >= 0.0)) throw ConfigError(join(path, "t"), "must be non-negative");
  a.c_r = number(j, "C_R", path, a.c_r);
  if (!(a.c_r >= 0.0)) throw ConfigError(join(path, "C_R"), "must be non-negative");
  a.compose = count(j, "compose", path, a.compose);
  if (a.compose < 1) throw ConfigError(join(path, "compose"), "must be positive");
  a.grid = count(j, "grid", path, a.grid);
  if (a.grid == 0 || (a.grid & (a.grid - 1)) != 0) throw ConfigError(join(path, "grid"), "must be a power of two");
  a.perturbations = count(j, "perturbations", path, a.perturbations);
  a.ratio_target = number(j, "ratio_target", path, a.ratio_target);
  return a;
}

ExpectedSpec parse_expected(const json& j, const std::string& path) {
  ExpectedSpec e;
  if (j.contains("exponents")) {
    const Eigen::VectorXd v = vector_value(j.at("exponents"), join(path, "exponents"));
    e.exponents.assign(v.data(), v.data() + v.size());
  }
  e.exponent_tolerance = number(j, "exponent_tolerance", path, e.exponent_tolerance);
  if (j.contains("spaces")) {
    const json& s = j.at("spaces");
    if (!s.is_array()) throw ConfigError(join(path, "spaces"), "expected a list of bases");
    for (std::size_t i = 0; i < s.size(); ++i)
      e.spaces.push_back(matrix_value(s[i], index_path(join(path, "spaces"), i)).transpose());
  }
  e.space_tolerance = number(j, "space_tolerance", path, e.space_tolerance);
  if (j.contains("kappa_star")) e.kappa_star = number_value(j.at("kappa_star"), join(path, "kappa_star"));
  e.kappa_tolerance = number(j, "kappa_tolerance", path, e.kappa_tolerance);
  return e;
}

}  // namespace

std::string_view to_string(AnalysisKind k) noexcept {
  switch (k) {
    case AnalysisKind::spectrum: return "spectrum";
    case AnalysisKind::splitting: return "splitting";
    case AnalysisKind::ulam: return "ulam";
    case AnalysisKind::diagnose: return "diagnose";
    case AnalysisKind::sobolev: return "sobolev";
  }
  return "spectrum";
}

AnalysisKind analysis_kind_from_string(const std::string& s) {
  for (auto k : {AnalysisKind::spectrum, AnalysisKind::splitting, AnalysisKind::ulam, AnalysisKind::diagnose,
                 AnalysisKind::sobolev})
    if (to_string(k) == s) return k;
  throw ConfigError("analysis.kind", "unknown analysis '" + s + "'");
}

PiecewiseExpandingMap1D parse_map(const json& j, const std::string& path) {
  try {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (name == "doubling") return presets::doubling();
      if (name == "tripling") return presets::tripling();
      if (name == "buzzi_keep") return presets::buzzi_keep();
      if (name == "buzzi_swap") return presets::buzzi_swap();
      if (name == "mixture_a") return presets::mixture_a();
      if (name == "mixture_b") return presets::mixture_b();
      throw ConfigError(path, "unknown map preset '" + name + "'");
    }
    if (!j.is_object()) throw ConfigError(path, "expected a preset name or an object");
    if (j.contains("preset")) {
      const std::string name = text(j, "preset", path, "");
      if (name == "full_two_branch") return presets::full_two_branch(rational_value(member(j, "slope", path), join(path, "slope")));
      if (name == "partial_two_branch")
        return presets::partial_two_branch(rational_value(member(j, "delta", path), join(path, "delta")));
      if (name == "smooth_doubling") return presets::smooth_doubling(number(j, "rho", path, 0.0));
      if (name == "two_interval_markov")
        return presets::two_interval_markov(static_cast<long>(count(j, "a", path, 10)),
                                            static_cast<long>(count(j, "b", path, 8)));
      return parse_map(json(name), join(path, "preset"));
    }
    const json& bs = member(j, "branches", path);
    if (!bs.is_array() || bs.empty()) throw ConfigError(join(path, "branches"), "expected a non-empty list");
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const std::string bp = index_path(join(path, "branches"), i);
      const json& b = bs[i];
      branches.push_back(Branch::smooth(rational_value(member(b, "lo", bp), join(bp, "lo")),
                                        rational_value(member(b, "hi", bp), join(bp, "hi")),
                                        rational_value(member(b, "slope", bp), join(bp, "slope")),
                                        rational_value(member(b, "intercept", bp), join(bp, "intercept")),
                                        number(b, "rho", bp, 0.0)));
    }
    return PiecewiseExpandingMap1D(std::move(branches), text(j, "name", path, "custom"));
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  ExperimentConfig c;
  c.source = doc;
  c.name = text(doc, "name", "", c.name);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  const bool driver_given = doc.contains("driver");
  if (driver_given) c.driver = parse_driver(doc.at("driver"), "driver");
  c.generator = parse_generator(member(doc, "generator", ""), "generator", c.driver, driver_given);
  const double alpha = c.generator.type == GeneratorSpec::Type::ly_system ? c.generator.system.alpha : 1.0;
  c.analysis = parse_analysis(doc.contains("analysis") ? doc.at("analysis") : json::object(), "analysis", alpha);
  if (doc.contains("expected")) c.expected = parse_expected(doc.at("expected"), "expected");
  if (doc.contains("output")) c.out_dir = text(doc.at("output"), "dir", "output", c.out_dir);

  const bool needs_maps = c.analysis.kind == AnalysisKind::ulam || c.analysis.kind == AnalysisKind::diagnose ||
                          c.analysis.kind == AnalysisKind::sobolev;
  if (needs_maps && c.generator.type != GeneratorSpec::Type::ly_system)
    throw ConfigError("generator.type", "analysis '" + std::string(to_string(c.analysis.kind)) + "' needs an ly_system");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace oseledets
