#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "octoarm/harness.hpp"
#include "octoarm/validation.hpp"

using namespace octoarm;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("octoarm_test_" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST_CASE("atlas output", "[harness]") {
  Scenario sc;
  sc.kind = ScenarioKind::atlas;
  sc.name = "grid";
  const fs::path a = scratch_dir("atlas_a");
  const fs::path b = scratch_dir("atlas_b");
  const AtlasOutput out = run_atlas(sc, a.string());
  REQUIRE(out.cells.size() == 16);
  CHECK(out.failed == 0);
  CHECK(out.cells[1].voltages.top_tip == 80.0);
  CHECK(out.cells[4].voltages.top_base == 40.0);

  const auto index = nlohmann::json::parse(slurp(out.index));
  CHECK(index["schema_version"] == "1");
  CHECK(index["cells"].size() == 16);
  CHECK(index["cells"][0]["status"] == "ok");

  const std::string csv = slurp(out.csv);
  CHECK(csv.rfind("cell,b,top_base,top_tip,bottom_base,bottom_tip,node,s,x,y,theta,kappa", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == 1 + 16 * 101);

  run_atlas(sc, b.string());
  CHECK(slurp(out.csv) == slurp(b / "atlas.csv"));
  CHECK(slurp(out.index) == slurp(b / "atlas_index.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("atlas rejects other scenario kinds", "[harness]") {
  Scenario sc;
  CHECK_THROWS_AS(run_atlas(sc, scratch_dir("wrong_kind").string()), ConfigError);
}

TEST_CASE("short reaching run", "[harness]") {
  Scenario sc;
  sc.name = "smoke";
  sc.time.duration = 0.05;
  sc.time.cadence = 0.01;
  const fs::path dir = scratch_dir("reach");
  const ReachingOutput out = run_reaching(sc, dir.string());
  CHECK_FALSE(out.run.error);
  CHECK(out.run.samples.size() == 6);
  CHECK(out.run.mechanical_substeps == 40);
  CHECK(out.run.samples.front().t == 0.0);
  CHECK(std::abs(out.run.samples.back().t - 0.05) < 1e-9);

  const std::string csv = slurp(out.trajectory);
  CHECK(csv.rfind(trajectory_header(), 0) == 0);
  // per sample: 101 node rows and one diagnostics row
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == 1 + 6 * 102);
  const auto summary = nlohmann::json::parse(slurp(out.summary));
  CHECK(summary["law"] == "sensory-feedback");
  CHECK(summary["error"].is_null());

  const fs::path again = scratch_dir("reach_again");
  run_reaching(sc, again.string());
  CHECK(slurp(again / "trajectory.csv") == csv);
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("unknown validation suite", "[harness]") {
  Scenario sc;
  sc.kind = ScenarioKind::validation;
  sc.suites = {"bvp-oracle", "telepathy"};
  CHECK_THROWS_AS(run_validation(sc), ConfigError);
}

TEST_CASE("number formatting is shortest round trip", "[harness]") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(40.0) == "40");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
