#include "oseledets/errors.hpp"
#include "oseledets/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oseledets;
using nlohmann::json;

namespace {

Report run_preset(const std::string& name) { return run(parse_config(preset_config(name))); }

const Check* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

const Trace* find_trace(const Report& r, const std::string& file) {
  for (const auto& t : r.traces)
    if (t.file == file) return &t;
  return nullptr;
}

}  // namespace

TEST_CASE("preset catalogue") {
  const auto presets = list_presets();
  CHECK_FALSE(presets.empty());
  bool buzzi = false;
  for (const auto& p : presets) {
    buzzi = buzzi || p.name == "buzzi_swap";
    CHECK_FALSE(p.description.empty());
    CHECK_NOTHROW(parse_config(preset_config(p.name)));
  }
  CHECK(buzzi);
  for (const char* n : {"doubling", "tripling", "bernoulli_mixture", "constant-2x2-eigen"}) CHECK_NOTHROW(preset_config(n));
  try {
    preset_config("nope");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "preset");
  }
}

TEST_CASE("constant-2x2-eigen report") {
  const Report r = run_preset("constant-2x2-eigen");
  CHECK(r.passed());
  const auto& ex = r.results["spectrum"]["exponents"];
  CHECK(ex[0].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(ex[1].get<double>() == doctest::Approx(-std::log(2.0)).epsilon(1e-10));
  for (const auto& c : r.checks) CHECK(c.tolerance >= 0.0);
  REQUIRE(find_check(r, "expected_spaces"));
  CHECK(find_check(r, "expected_spaces")->value < 1e-8);
}

TEST_CASE("doubling-ulam-64 top exponent") {
  const Report r = run_preset("doubling-ulam-64");
  REQUIRE(find_check(r, "top_exponent_zero"));
  CHECK(find_check(r, "top_exponent_zero")->passed);
  // The verdict is recomputable from the stored trace.
  const Trace* t = find_trace(r, "trace_spectrum.csv");
  REQUIRE(t);
  CHECK(std::abs(t->rows.back()[1]) <= 1e-6);
}

TEST_CASE("reports are reproducible") {
  for (const char* name : {"period-2-matrices", "random_slope", "doubling"}) {
    const std::string a = to_json(run_preset(name), false).dump();
    const std::string b = to_json(run_preset(name), false).dump();
    CHECK(a == b);
  }
}

TEST_CASE("sobolev verdicts follow from the probe trace") {
  const Report r = run_preset("continuity-doubling");
  const Trace* t = find_trace(r, "trace_probe.csv");
  REQUIRE(t);
  REQUIRE(t->rows.size() == 10);
  bool decreasing = true;
  for (std::size_t i = 1; i < t->rows.size(); ++i) decreasing = decreasing && t->rows[i][3] < t->rows[i - 1][3];
  CHECK(find_check(r, "strictly_decreasing")->passed == decreasing);
  const double ratio = t->rows.back()[3] / t->rows.front()[3];
  CHECK(find_check(r, "final_over_initial")->value == doctest::Approx(ratio));
}

TEST_CASE("diagnose and ulam presets") {
  const Report d = run_preset("tripling");
  CHECK(d.passed());
  CHECK(d.results["diagnose"]["kappa_star"].get<double>() == doctest::Approx(0.25 * std::log(1.0 / 3)).epsilon(1e-12));
  const Report u = run_preset("doubling-ulam-exact");
  CHECK(u.passed());
  CHECK(find_trace(u, "trace_ulam_0.csv")->rows.size() == 64);
}

TEST_CASE("infinite values are written as strings") {
  json doc = preset_config("period-2-matrices");
  const Report r = run(parse_config(doc));
  const json j = to_json(r);
  const auto& raw = j["results"]["spectrum"]["raw"];
  bool any = false;
  for (const auto& v : raw) any = any || (v.is_string() && v.get<std::string>() == "-inf");
  CHECK(any);
  CHECK(j.contains("timings"));
  CHECK_FALSE(to_json(r, false).contains("timings"));
}

TEST_CASE("module errors are tagged with their stage") {
  json doc = preset_config("constant-2x2-eigen");
  doc["generator"]["matrices"] = json::parse(R"([[[1, 0], [0, 0]]])");
  doc["analysis"]["n_max"] = 8;
  doc["analysis"]["n_start"] = 8;
  // Pushing e2 forward through a projection collapses it.
  try {
    const Report r = run(parse_config(doc));
    CHECK(r.results.contains("splitting"));
  } catch (const StageError& e) {
    CHECK_FALSE(e.stage().empty());
  }
}

TEST_CASE("CSV traces use a plain decimal format") {
  const Trace t{"trace_x.csv", {"a", "b"}, {{0.5, -INFINITY}, {1e-20, 3.0}}};
  CHECK(format_csv(t) == "a,b\n0.5,-inf\n9.9999999999999995e-21,3\n");
}

TEST_CASE("reports are written to disk") {
  const auto dir = std::filesystem::temp_directory_path() / "oseledets_report_test";
  std::filesystem::remove_all(dir);
  write_report(run_preset("constant-diag"), dir.string());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "trace_spectrum.csv"));
  std::ifstream in(dir / "report.json");
  const json j = json::parse(in);
  CHECK(j["passed"].get<bool>());
  std::filesystem::remove_all(dir);
}
