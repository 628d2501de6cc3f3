#pragma once

// Config-driven experiments: run one analysis, collect verdicts and traces.

#include "oseledets/config.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace oseledets {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Plot-ready table written as `file` (header row, comma separated).
struct Trace {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string name;
  AnalysisKind kind = AnalysisKind::spectrum;
  nlohmann::json config;
  nlohmann::json results;
  std::vector<Check> checks;
  std::vector<Trace> traces;
  std::vector<std::string> warnings;
  /// Wall-clock seconds per stage; excluded from the deterministic part.
  std::map<std::string, double> timings;

  bool passed() const;
};

/// Deterministic given the config. Throws StageError naming the stage that
/// raised a module error.
Report run(const ExperimentConfig& config);

/// The report as JSON; `with_timings = false` gives the reproducible part.
nlohmann::json to_json(const Report& report, bool with_timings = true);

std::string format_csv(const Trace& trace);

/// Writes report.json and every trace into `dir` (created if missing).
void write_report(const Report& report, const std::string& dir);

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();

/// Config document of a preset. Throws ConfigError("preset") for unknown names.
nlohmann::json preset_config(const std::string& name);

}  // namespace oseledets
