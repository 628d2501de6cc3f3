#include "oseledets/errors.hpp"
#include "oseledets/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace oseledets;

struct Common {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config, "experiment config (JSON)");
  app->add_option("-p,--preset", c.preset, "named preset instead of a config file");
  app->add_option("-s,--seed", c.seed, "override the config seed");
  app->add_option("-o,--out", c.out, "output directory");
  app->add_flag("-q,--quiet", c.quiet, "only print the verdict");
}

ExperimentConfig resolve(const Common& c, std::optional<AnalysisKind> kind) {
  nlohmann::json doc;
  if (!c.preset.empty() && !c.config.empty()) throw ConfigError("config", "give either --config or --preset");
  if (!c.preset.empty()) {
    doc = preset_config(c.preset);
  } else if (!c.config.empty()) {
    doc = load_config(c.config).source;
  } else {
    throw ConfigError("config", "a --config file or a --preset is required");
  }
  if (c.seed) doc["seed"] = *c.seed;
  if (kind) doc["analysis"]["kind"] = std::string(to_string(*kind));
  ExperimentConfig cfg = parse_config(doc);
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

void print_summary(const Report& r, bool quiet) {
  if (!quiet) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& c : r.checks)
      std::cout << (c.passed ? "  ok    " : "  FAIL  ") << c.name << " = " << c.value << " (tol " << c.tolerance
                << ")\n";
  }
  std::cout << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << '\n';
}

int run_one(const Common& c, std::optional<AnalysisKind> kind) {
  const ExperimentConfig cfg = resolve(c, kind);
  const Report r = run(cfg);
  write_report(r, cfg.out_dir);
  print_summary(r, c.quiet);
  return r.passed() ? 0 : 1;
}

int run_batch(const std::vector<std::string>& items, const std::string& out, bool quiet) {
  std::vector<ExperimentConfig> configs;
  for (const auto& item : items) {
    Common c;
    if (std::filesystem::exists(item))
      c.config = item;
    else
      c.preset = item;
    ExperimentConfig cfg = resolve(c, std::nullopt);
    cfg.out_dir = (std::filesystem::path(out) / cfg.name).string();
    configs.push_back(std::move(cfg));
  }
  std::vector<std::future<Report>> jobs;
  for (const auto& cfg : configs) jobs.push_back(std::async(std::launch::async, [&cfg] { return run(cfg); }));
  int code = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      const Report r = jobs[i].get();
      write_report(r, configs[i].out_dir);
      print_summary(r, quiet);
      if (!r.passed()) code = std::max(code, 1);
    } catch (const Error& e) {
      std::cerr << configs[i].name << ": error: " << e.what() << '\n';
      code = 2;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  CLI::App app{"Oseledets splittings of random Lasota-Yorke systems and matrix cocycles"};
  app.require_subcommand(1);

  Common common;
  std::optional<AnalysisKind> kind;
  const std::pair<const char*, AnalysisKind> kinds[] = {
      {"spectrum", AnalysisKind::spectrum}, {"splitting", AnalysisKind::splitting}, {"ulam", AnalysisKind::ulam},
      {"diagnose", AnalysisKind::diagnose}, {"sobolev", AnalysisKind::sobolev}};
  const char* help[] = {"Lyapunov spectrum with multiplicities", "Oseledets splitting and convergence diagnostics",
                        "Ulam matrices of the system's maps", "complexity counters and Lasota-Yorke bounds",
                        "Sobolev-norm continuity probe"};
  for (std::size_t i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(kinds[i].first, help[i]);
    add_common(sub, common);
    sub->callback([&kind, k = kinds[i].second] { kind = k; });
  }

  auto* run_sub = app.add_subcommand("run", "run a config with the analysis it names");
  add_common(run_sub, common);

  std::vector<std::string> batch_items;
  std::string batch_out = "out";
  bool batch_quiet = false;
  auto* batch = app.add_subcommand("batch", "run several configs or presets concurrently");
  batch->add_option("items", batch_items, "config files or preset names")->required();
  batch->add_option("-o,--out", batch_out, "parent output directory");
  batch->add_flag("-q,--quiet", batch_quiet, "only print verdicts");

  auto* presets = app.add_subcommand("presets", "list the built-in presets");
  std::string show;
  presets->add_option("name", show, "print this preset's config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      if (!show.empty()) {
        std::cout << preset_config(show).dump(2) << '\n';
      } else {
        for (const auto& p : list_presets()) std::cout << p.name << "\t" << p.description << '\n';
      }
      return 0;
    }
    if (batch->parsed()) return run_batch(batch_items, batch_out, batch_quiet);
    return run_one(common, kind);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
