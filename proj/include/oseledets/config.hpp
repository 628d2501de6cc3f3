#pragma once

// Experiment configuration: a JSON document with a fixed schema.
//
//   {
//     "name": "...", "seed": 1,
//     "driver":    {"type": "cycle" | "rotation" | "bernoulli" | "markov", ...},
//     "generator": {"type": "matrices", "matrices": [[[...]]]}
//                | {"type": "ly_system", "maps": [...] | "family": {...}, "n_bins": 64, "exact": true},
//     "analysis":  {"kind": "spectrum" | "splitting" | "ulam" | "diagnose" | "sobolev", ...},
//     "expected":  {...}, "output": {"dir": "out"}
//   }
//
// Any number may be written as a JSON number or as a string "num/den".

#include "oseledets/base.hpp"
#include "oseledets/maps.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oseledets {

enum class AnalysisKind { spectrum, splitting, ulam, diagnose, sobolev };

std::string_view to_string(AnalysisKind k) noexcept;
AnalysisKind analysis_kind_from_string(const std::string& s);

struct GeneratorSpec {
  enum class Type { matrices, ly_system } type = Type::matrices;
  std::vector<Eigen::MatrixXd> matrices;
  RandomLYSystem system;
  std::size_t n_bins = 64;
  bool exact = true;
};

struct AnalysisSpec {
  AnalysisKind kind = AnalysisKind::spectrum;
  // spectrum
  std::size_t n = 1000;
  double gap_threshold = 0.05;
  std::size_t count = 0;
  // splitting
  std::size_t n_start = 8;
  std::size_t n_max = 256;
  double tol = 1e-6;
  std::size_t levels = 0;
  std::size_t horizon = 64;
  bool full_trace = false;
  // diagnose
  double p = 2.0;
  double t = 0.25;
  double c_r = 1.0;
  std::size_t compose = 8;
  // sobolev
  std::size_t grid = 1024;
  std::size_t perturbations = 10;
  double ratio_target = 1e-3;
};

struct ExpectedSpec {
  std::vector<double> exponents;
  double exponent_tolerance = 1e-8;
  /// Column bases of Y_1, Y_2, ...
  std::vector<Eigen::MatrixXd> spaces;
  double space_tolerance = 1e-8;
  std::optional<double> kappa_star;
  double kappa_tolerance = 1e-12;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  Driver driver = FiniteCycle{};
  GeneratorSpec generator;
  AnalysisSpec analysis;
  ExpectedSpec expected;
  std::string out_dir = "out";
  /// The document this was parsed from.
  nlohmann::json source;
};

/// Throws ConfigError naming the offending field, e.g. "analysis.p".
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Map from a preset name, a preset object or an explicit branch list.
PiecewiseExpandingMap1D parse_map(const nlohmann::json& j, const std::string& path);

}  // namespace oseledets
