#pragma once

// Scenario drivers: rest-shape atlas, reaching runs and their output files.
//
// Output schemas (all numbers in shortest round-trip decimal form):
//
// atlas.csv
//   cell,b,top_base,top_tip,bottom_base,bottom_tip,node,s,x,y,theta,kappa,
//   V_top,V_bottom,a_top,a_bottom
// atlas_index.json
//   {schema_version, name, cells: [{cell, index: {b, top_base, top_tip},
//    b, top_base, top_tip, bottom_base, bottom_tip, status, error,
//    kappa_tip, curl, base_mean, tip: [x, y]}]}
// trajectory.csv
//   t,node,s,r_x,r_y,theta,kappa,V_top,V_bottom,W_top,W_bottom,I_top,
//   I_bottom,u_net,kappa_tip,s_bar_over_L,energy,lyap_neural,max_speed,
//   reach_status
//   Node rows (node >= 0) leave the diagnostic columns empty; one row with
//   node = -1 per sample carries the diagnostics and leaves the rest empty.
// summary.json
//   {schema_version, name, law, dt, mechanical_substeps, samples, initial,
//    final, error}

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "octoarm/control.hpp"
#include "octoarm/coupling.hpp"
#include "octoarm/diagnostics.hpp"
#include "octoarm/equilibrium.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/scenario.hpp"
#include "octoarm/simulation.hpp"

namespace octoarm {

inline SimulationSetup make_setup(const Scenario& sc) {
  SimulationSetup setup;
  setup.cable = sc.cable;
  setup.drag = sc.drag;
  setup.rotational_damping = sc.rotational_damping;
  setup.control = sc.control;
  setup.target = sc.target;
  setup.dt = sc.time.dt;
  setup.mechanical_substeps = sc.time.mechanical_substeps;
  return setup;
}

inline std::filesystem::path prepare_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p)) throw ConfigError("output", "cannot create directory '" + dir + "'");
  return p;
}

// ---------------------------------------------------------------- atlas

struct AtlasCell {
  std::size_t index = 0;
  std::size_t i_b = 0, i_top_base = 0, i_top_tip = 0;
  RestVoltages voltages;
  double b = 1.0;
  std::optional<RestShape> shape;
  std::string error;
};

/// Evaluates every grid cell (b outermost, then top_base, then top_tip).
/// Cells are spread over the available hardware threads; the result order
/// does not depend on scheduling.
inline std::vector<AtlasCell> compute_atlas(const Scenario& sc, unsigned threads = 0) {
  const ArmGeometry geom = build_arm(sc.geometry);
  std::vector<AtlasCell> cells;
  for (std::size_t ib = 0; ib < sc.atlas.b.size(); ++ib) {
    for (std::size_t i0 = 0; i0 < sc.atlas.top_base.size(); ++i0) {
      for (std::size_t il = 0; il < sc.atlas.top_tip.size(); ++il) {
        AtlasCell c;
        c.index = cells.size();
        c.i_b = ib;
        c.i_top_base = i0;
        c.i_top_tip = il;
        c.b = sc.atlas.b[ib];
        c.voltages = {sc.atlas.top_base[i0], sc.atlas.top_tip[il], sc.atlas.bottom_base, sc.atlas.bottom_tip};
        cells.push_back(c);
      }
    }
  }
  auto work = [&](std::size_t k) {
    AtlasCell& c = cells[k];
    CableParams p = sc.cable;
    p.b = c.b;
    try {
      c.shape = rest_shape(c.voltages, p, geom);
    } catch (const Error& e) {
      c.error = e.what();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < cells.size(); ++k) work(k);
    return cells;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < cells.size(); k += threads) work(k);
    });
  }
  for (auto& t : pool) t.join();
  return cells;
}

struct AtlasOutput {
  std::vector<AtlasCell> cells;
  std::size_t failed = 0;
  std::filesystem::path csv;
  std::filesystem::path index;
};

inline AtlasOutput run_atlas(const Scenario& sc, const std::string& out_dir) {
  if (sc.kind != ScenarioKind::atlas) throw ConfigError("kind", "run_atlas needs an atlas scenario");
  sc.validate();
  const ArmGeometry geom = build_arm(sc.geometry);
  const auto dir = prepare_output_dir(out_dir);
  AtlasOutput out;
  out.cells = compute_atlas(sc);
  out.csv = dir / "atlas.csv";
  out.index = dir / "atlas_index.json";

  std::ofstream csv(out.csv, std::ios::binary);
  csv << "cell,b,top_base,top_tip,bottom_base,bottom_tip,node,s,x,y,theta,kappa,V_top,V_bottom,a_top,a_bottom\n";
  nlohmann::ordered_json index;
  index["schema_version"] = kSchemaVersion;
  index["name"] = sc.name;
  index["cells"] = nlohmann::ordered_json::array();
  for (const AtlasCell& c : out.cells) {
    nlohmann::ordered_json j;
    j["cell"] = c.index;
    j["index"] = {{"b", c.i_b}, {"top_base", c.i_top_base}, {"top_tip", c.i_top_tip}};
    j["b"] = c.b;
    j["top_base"] = c.voltages.top_base;
    j["top_tip"] = c.voltages.top_tip;
    j["bottom_base"] = c.voltages.bottom_base;
    j["bottom_tip"] = c.voltages.bottom_tip;
    if (!c.shape) {
      ++out.failed;
      j["status"] = "error";
      j["error"] = c.error;
      index["cells"].push_back(j);
      continue;
    }
    const RestShape& r = *c.shape;
    j["status"] = "ok";
    j["error"] = nullptr;
    j["kappa_tip"] = r.kappa_tip;
    j["curl"] = r.curl;
    j["base_mean"] = r.base_mean;
    j["tip"] = {r.centerline.position.back().x, r.centerline.position.back().y};
    index["cells"].push_back(j);

    const Field phi = node_angles(r.centerline.element_angle);
    const std::string prefix = std::to_string(c.index) + "," + format_number(c.b) + "," +
                               format_number(c.voltages.top_base) + "," + format_number(c.voltages.top_tip) + "," +
                               format_number(c.voltages.bottom_base) + "," + format_number(c.voltages.bottom_tip) + ",";
    for (std::size_t i = 0; i < geom.nodes(); ++i) {
      const Vec2 p = r.centerline.position[i];
      csv << prefix << i << ',' << format_number(geom.s[i]) << ',' << format_number(p.x) << ','
          << format_number(p.y) << ',' << format_number(phi[i]) << ',' << format_number(r.kappa[i]) << ','
          << format_number(r.v_top[i]) << ',' << format_number(r.v_bottom[i]) << ','
          << format_number(sigma(r.v_top[i])) << ',' << format_number(sigma(r.v_bottom[i])) << '\n';
    }
  }
  std::ofstream(out.index, std::ios::binary) << index.dump(2) << '\n';
  if (!csv) throw Error("run_atlas: failed writing " + out.csv.string());
  return out;
}

// ---------------------------------------------------------------- reaching

struct ReachingRun {
  std::vector<DiagnosticsSample> samples;
  std::vector<Vec2> tip;
  ReachStatus final_status = ReachStatus::not_reached;
  std::optional<std::string> error;
  double dt = 0.0;
  int mechanical_substeps = 0;
  std::size_t capped_currents = 0;
  double wall_seconds = 0.0;
};

using SampleObserver = std::function<void(const ArmSimulation&, const DiagnosticsSample&)>;

/// Runs the coupled arm from the rest shape and records diagnostics at every
/// output sample. An integration failure ends the run early and is recorded
/// in `error`; the samples gathered so far are kept.
inline ReachingRun simulate_reaching(const Scenario& sc, const SampleObserver& observe = {}) {
  sc.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const ArmGeometry geom = build_arm(sc.geometry);
  ArmSimulation sim(geom, make_setup(sc));
  sim.initialize_rest(sc.initial);

  ReachingRun run;
  run.dt = sim.dt();
  run.mechanical_substeps = sim.mechanical_substeps();
  const auto per_sample = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sc.time.cadence / sim.dt())));
  const auto samples = static_cast<std::size_t>(std::llround(sc.time.duration / sc.time.cadence));

  auto record = [&] {
    const DiagnosticsSample d = sim.sample();
    run.samples.push_back(d);
    run.tip.push_back(sim.rod_state().r.back());
    if (observe) observe(sim, d);
  };
  record();
  try {
    for (std::size_t k = 0; k < samples; ++k) {
      sim.advance(per_sample);
      record();
    }
  } catch (const IntegrationError& e) {
    run.error = e.what();
  }
  run.final_status = run.samples.back().reach;
  run.capped_currents = sim.capped_currents();
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return run;
}

inline const char* trajectory_header() {
  return "t,node,s,r_x,r_y,theta,kappa,V_top,V_bottom,W_top,W_bottom,I_top,I_bottom,u_net,"
         "kappa_tip,s_bar_over_L,energy,lyap_neural,max_speed,reach_status\n";
}

inline void write_trajectory_rows(std::ostream& os, const ArmSimulation& sim, const DiagnosticsSample& d) {
  const ArmGeometry& g = sim.geometry();
  const RodState& st = sim.rod_state();
  const Field phi = node_angles(st.theta);
  const Field kappa = st.curvature(g.ds);
  const std::string t = format_number(d.t);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    os << t << ',' << i << ',' << format_number(g.s[i]) << ',' << format_number(st.r[i].x) << ','
       << format_number(st.r[i].y) << ',' << format_number(phi[i]) << ',' << format_number(kappa[i]) << ','
       << format_number(sim.top().V[i]) << ',' << format_number(sim.bottom().V[i]) << ','
       << format_number(sim.top().W[i]) << ',' << format_number(sim.bottom().W[i]) << ','
       << format_number(sim.currents().top[i]) << ',' << format_number(sim.currents().bottom[i]) << ','
       << format_number(sim.net_couple()[i]) << ",,,,,,\n";
  }
  os << t << ",-1,,,,,,,,,,,,," << format_number(d.kappa_tip) << ',' << format_number(d.s_bar_over_L) << ','
     << format_number(d.energy) << ',' << (d.lyap_neural ? format_number(*d.lyap_neural) : std::string()) << ','
     << format_number(d.max_speed) << ',' << to_string(d.reach) << '\n';
}

inline nlohmann::ordered_json sample_json(const DiagnosticsSample& d) {
  nlohmann::ordered_json j;
  j["t"] = d.t;
  j["kappa_tip"] = d.kappa_tip;
  j["s_bar_over_L"] = d.s_bar_over_L;
  j["energy"] = d.energy;
  j["lyap_neural"] = d.lyap_neural ? nlohmann::ordered_json(*d.lyap_neural) : nlohmann::ordered_json(nullptr);
  j["max_speed"] = d.max_speed;
  j["reach_status"] = to_string(d.reach);
  return j;
}

struct ReachingOutput {
  ReachingRun run;
  std::filesystem::path trajectory;
  std::filesystem::path summary;
};

inline ReachingOutput run_reaching(const Scenario& sc, const std::string& out_dir) {
  if (sc.kind != ScenarioKind::reaching) throw ConfigError("kind", "run_reaching needs a reaching scenario");
  sc.validate();
  const auto dir = prepare_output_dir(out_dir);
  ReachingOutput out;
  out.trajectory = dir / "trajectory.csv";
  out.summary = dir / "summary.json";
  std::ofstream csv(out.trajectory, std::ios::binary);
  csv << trajectory_header();
  out.run = simulate_reaching(sc, [&csv](const ArmSimulation& sim, const DiagnosticsSample& d) {
    write_trajectory_rows(csv, sim, d);
  });
  csv.flush();

  nlohmann::ordered_json s;
  s["schema_version"] = kSchemaVersion;
  s["name"] = sc.name;
  s["law"] = to_string(sc.control.law);
  s["dt"] = out.run.dt;
  s["mechanical_substeps"] = out.run.mechanical_substeps;
  s["samples"] = out.run.samples.size();
  s["capped_currents"] = out.run.capped_currents;
  s["initial"] = sample_json(out.run.samples.front());
  s["final"] = sample_json(out.run.samples.back());
  s["error"] = out.run.error ? nlohmann::ordered_json(*out.run.error) : nlohmann::ordered_json(nullptr);
  std::ofstream(out.summary, std::ios::binary) << s.dump(2) << '\n';
  if (!csv) throw Error("run_reaching: failed writing " + out.trajectory.string());
  return out;
}

}  // namespace octoarm
