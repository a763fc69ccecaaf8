// octoarm: command-line front end.
//
//   octoarm atlas    <config> <out-dir>
//   octoarm reach    <config> <out-dir>
//   octoarm validate <config> [out-dir]
//   octoarm describe [config]
//
// Exit codes: 0 success, 1 a validation suite failed or a run stopped on an
// integration error, 2 configuration error, 3 any other error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "octoarm/octoarm.hpp"

namespace {

int run_atlas_verb(const std::string& config, const std::string& out) {
  const octoarm::Scenario sc = octoarm::load_scenario(config);
  if (sc.kind != octoarm::ScenarioKind::atlas) throw octoarm::ConfigError("kind", "the atlas verb needs kind: atlas");
  const auto res = octoarm::run_atlas(sc, out);
  std::cout << "atlas: " << res.cells.size() << " cells, " << res.failed << " failed -> " << res.index.string() << "\n";
  return 0;
}

int run_reach_verb(const std::string& config, const std::string& out) {
  const octoarm::Scenario sc = octoarm::load_scenario(config);
  if (sc.kind != octoarm::ScenarioKind::reaching) {
    throw octoarm::ConfigError("kind", "the reach verb needs kind: reaching");
  }
  const auto res = octoarm::run_reaching(sc, out);
  const auto& last = res.run.samples.back();
  std::cout << "reach: law " << octoarm::to_string(sc.control.law) << ", t = " << last.t
            << " s, s_bar/L = " << last.s_bar_over_L << ", kappa_tip = " << last.kappa_tip
            << ", status " << octoarm::to_string(last.reach) << "\n";
  if (res.run.error) {
    std::cerr << "integration error: " << *res.run.error << "\n";
    return 1;
  }
  return 0;
}

int run_validate_verb(const std::string& config, const std::string& out) {
  const octoarm::Scenario sc = octoarm::load_scenario(config);
  if (sc.kind != octoarm::ScenarioKind::validation) {
    throw octoarm::ConfigError("kind", "the validate verb needs kind: validation");
  }
  const auto rep = octoarm::run_validation(sc, [](const octoarm::SuiteResult& r) {
    std::printf("%-4s %-20s metric %-12.6g tol %-10.4g %6.1f s  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.metric, r.tolerance, r.seconds, r.detail.c_str());
    std::fflush(stdout);
  });
  if (!out.empty()) {
    const auto dir = octoarm::prepare_output_dir(out);
    std::ofstream(dir / "validation.json", std::ios::binary) << octoarm::to_json(rep).dump(2) << '\n';
  }
  return rep.passed() ? 0 : 1;
}

int run_describe_verb(const std::string& config) {
  const octoarm::Scenario sc = config.empty() ? octoarm::Scenario{} : octoarm::load_scenario(config);
  std::cout << "octoarm " << octoarm::kVersion << "\n"
            << "config schema " << octoarm::kSchemaVersion << "\n\n"
            << (config.empty() ? "# default scenario" : "# scenario " + config) << " (canonical form)\n"
            << octoarm::serialize_scenario(sc) << "\n"
            << "# validation suites\n";
  for (const auto& s : octoarm::validation_suites()) std::cout << "- " << s.name << "\n";
  std::cout << "\n# trajectory.csv columns\n" << octoarm::trajectory_header();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar octopus-arm neuromuscular simulator"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  auto* atlas = app.add_subcommand("atlas", "rest-shape atlas over a voltage grid");
  atlas->add_option("config", config, "scenario file")->required()->check(CLI::ExistingFile);
  atlas->add_option("out", out, "output directory")->required();
  auto* reach = app.add_subcommand("reach", "reaching run from the rest shape");
  reach->add_option("config", config, "scenario file")->required()->check(CLI::ExistingFile);
  reach->add_option("out", out, "output directory")->required();
  auto* validate = app.add_subcommand("validate", "run the validation suites");
  validate->add_option("config", config, "scenario file")->required()->check(CLI::ExistingFile);
  validate->add_option("out", out, "output directory for validation.json");
  auto* describe = app.add_subcommand("describe", "print version, a scenario in canonical form and output schema");
  describe->add_option("config", config, "scenario file (defaults when omitted)")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*atlas) return run_atlas_verb(config, out);
    if (*reach) return run_reach_verb(config, out);
    if (*validate) return run_validate_verb(config, out);
    if (*describe) return run_describe_verb(config);
  } catch (const octoarm::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
