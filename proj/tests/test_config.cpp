#include "oseledets/config.hpp"
#include "oseledets/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace oseledets;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

json diagnose_doc() {
  return json::parse(R"({"name": "d", "driver": {"type": "cycle"},
    "generator": {"type": "ly_system", "maps": ["doubling"]},
    "analysis": {"kind": "diagnose", "p": 2, "t": "1/4"}})");
}

}  // namespace

TEST_CASE("a full config parses") {
  const ExperimentConfig c = parse_config(json::parse(R"({
    "name": "m", "seed": 9,
    "driver": {"type": "markov", "transition": [[0.9, 0.1], ["2/5", "3/5"]]},
    "generator": {"type": "matrices", "matrices": [[[2, 1], [0, "1/2"]], [[1, 0], [0, 1]]]},
    "analysis": {"kind": "splitting", "n": 300, "n_max": 64, "tol": 1e-9, "levels": 1},
    "expected": {"exponents": [1, -1], "spaces": [[[1, 0]]]},
    "output": {"dir": "somewhere"}})"));
  CHECK(c.name == "m");
  CHECK(c.seed == 9);
  CHECK(std::holds_alternative<MarkovShift>(c.driver));
  CHECK(std::get<MarkovShift>(c.driver).transition(1, 0) == doctest::Approx(0.4));
  REQUIRE(c.generator.matrices.size() == 2);
  CHECK(c.generator.matrices[0](1, 1) == 0.5);
  CHECK(c.analysis.kind == AnalysisKind::splitting);
  CHECK(c.analysis.n_max == 64);
  CHECK(c.analysis.levels == 1);
  CHECK(c.expected.spaces.at(0).cols() == 1);
  CHECK(c.out_dir == "somewhere");
}

TEST_CASE("ly systems from presets and branch lists") {
  const ExperimentConfig a = parse_config(json::parse(R"({"generator": {"type": "ly_system", "system": "buzzi_swap", "n_bins": 32}})"));
  CHECK(a.generator.system.table.size() == 2);
  CHECK(std::holds_alternative<BernoulliShift>(a.driver));
  const ExperimentConfig b = parse_config(json::parse(R"({"driver": {"type": "cycle", "period": 2},
    "generator": {"type": "ly_system", "maps": [
      {"preset": "full_two_branch", "slope": "5/2"},
      {"branches": [{"lo": 0, "hi": "1/2", "slope": 2, "intercept": 0}, {"lo": "1/2", "hi": 1, "slope": 2, "intercept": -1}]}]}})"));
  REQUIRE(b.generator.system.table.size() == 2);
  CHECK(b.generator.system.table[0].branches()[0].derivative(0.1) == doctest::Approx(2.5));
  CHECK(b.generator.system.table[1](0.75) == doctest::Approx(0.5));
  CHECK(parse_map(json("tripling"), "m").branch_count() == 3);
  CHECK_THROWS_AS(parse_map(json("quadrupling"), "m"), ConfigError);
}

TEST_CASE("validation errors name the field") {
  json d = diagnose_doc();
  d["analysis"]["p"] = 1;
  CHECK(field_of(d) == "analysis.p");
  d = diagnose_doc();
  d["analysis"]["t"] = 0.9;
  CHECK(field_of(d) == "analysis.t");
  d = diagnose_doc();
  d["analysis"]["kind"] = "fourier";
  CHECK(field_of(d) == "analysis.kind");
  d = diagnose_doc();
  d["driver"]["type"] = "tent";
  CHECK(field_of(d) == "driver.type");
  d = diagnose_doc();
  d["generator"]["maps"] = json::array({"nope"});
  CHECK(field_of(d).rfind("generator.maps", 0) == 0);
  d = diagnose_doc();
  d["analysis"]["grid"] = 1000;
  CHECK(field_of(d) == "analysis.grid");
  CHECK(field_of(json::parse(R"({"generator": {"type": "matrices", "matrices": [[[1, 2]]]}})")).rfind("generator.matrices", 0) == 0);
  CHECK(field_of(json::parse(R"({"generator": {"type": "matrices", "matrices": [[[1]]]}, "analysis": {"kind": "ulam"}})")) ==
        "generator.type");
  CHECK(field_of(json::parse(R"({"seed": -3})")) == "seed");
  CHECK(field_of(json::parse(R"({"generator": {"type": "matrices", "matrices": [[[1]]]}, "analysis": {"tol": "1/0"}})")) == "analysis.tol");
}

TEST_CASE("analysis kinds round-trip") {
  for (AnalysisKind k : {AnalysisKind::spectrum, AnalysisKind::splitting, AnalysisKind::ulam, AnalysisKind::diagnose,
                         AnalysisKind::sobolev})
    CHECK(analysis_kind_from_string(std::string(to_string(k))) == k);
  CHECK_THROWS_AS(analysis_kind_from_string("x"), ConfigError);
}

TEST_CASE("loading from disk") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
