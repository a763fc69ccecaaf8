#pragma once

// Scenario files (YAML). Every mechanics and neural entry defaults to the
// reference parameter set, so an empty block reproduces it. Unknown keys are
// rejected so that typos surface as configuration errors.
//
//   kind: atlas | reaching | validation
//   name: free text
//   geometry: {length, elements, base_radius, tip_radius, youngs_modulus,
//              density, damping, max_couple, rotational_damping}
//   cable: {tau, tau_tilde, lambda, b}
//   drag: {c_tangential, c_normal, mode}
//   control: {law, mu, mu_star, beta, epsilon, current_cap}
//   initial_voltages: {top_base, top_tip, bottom_base, bottom_tip}
//   target: [x, y]
//   time: {duration, cadence, dt, mechanical_substeps}
//   atlas: {bottom_base, bottom_tip, top_base: [..], top_tip: [..], b: [..]}
//   validation: {suites: [..]}

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "octoarm/control.hpp"
#include "octoarm/equilibrium.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/neural_cable.hpp"
#include "octoarm/rod_dynamics.hpp"

namespace octoarm {

inline constexpr const char* kSchemaVersion = "1";

enum class ScenarioKind { atlas, reaching, validation };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::atlas: return "atlas";
    case ScenarioKind::reaching: return "reaching";
    case ScenarioKind::validation: return "validation";
  }
  return "?";
}

struct AtlasGrid {
  double bottom_base = 40.0;
  double bottom_tip = 0.0;
  std::vector<double> top_base{30.0, 40.0, 50.0, 60.0};
  std::vector<double> top_tip{60.0, 80.0, 100.0, 120.0};
  std::vector<double> b{1.0};
};

struct TimeConfig {
  double duration = 60.0;   // [s]
  double cadence = 0.01;    // [s]
  double dt = 0.0;          // [s], 0 = suggest_dt
  int mechanical_substeps = 0;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::reaching;
  std::string name;
  GeometryConfig geometry;
  RotationalDamping rotational_damping = RotationalDamping::literal;
  CableParams cable;
  DragModel drag;
  ControlConfig control;
  RestVoltages initial{65.0, 65.0, 40.0, 0.0};
  Vec2 target{0.2, 0.1};
  TimeConfig time;
  AtlasGrid atlas;
  std::vector<std::string> suites;  // empty = all

  void validate() const {
    build_arm(geometry);
    cable.validate();
    drag.validate();
    control.validate();
    if (!(time.duration > 0.0)) throw ConfigError("time.duration", "must be positive");
    if (!(time.cadence > 0.0)) throw ConfigError("time.cadence", "must be positive");
    if (time.cadence > time.duration) throw ConfigError("time.cadence", "must not exceed the duration");
    if (time.dt < 0.0) throw ConfigError("time.dt", "must be non-negative");
    if (time.mechanical_substeps < 0) throw ConfigError("time.mechanical_substeps", "must be non-negative");
    if (!std::isfinite(target.x) || !std::isfinite(target.y)) throw ConfigError("target", "must be finite");
    if (kind == ScenarioKind::atlas) {
      if (atlas.top_base.empty()) throw ConfigError("atlas.top_base", "must list at least one value");
      if (atlas.top_tip.empty()) throw ConfigError("atlas.top_tip", "must list at least one value");
      if (atlas.b.empty()) throw ConfigError("atlas.b", "must list at least one value");
      for (double b : atlas.b) {
        if (!(b >= 0.0)) throw ConfigError("atlas.b", "adaptation strengths must be non-negative");
      }
    }
  }
};

namespace detail {

inline void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node) return;
  if (!node.IsMap()) throw ConfigError(where.empty() ? "<root>" : where, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, const std::string& where, T& out) {
  if (!node || !node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + "." + key, std::string("cannot parse value: ") + e.what());
  }
}

inline std::vector<double> read_list(const YAML::Node& node, const char* key, const std::string& where,
                                     std::vector<double> fallback) {
  if (!node || !node[key]) return fallback;
  const YAML::Node list = node[key];
  if (list.IsScalar()) {
    try {
      return {list.as<double>()};
    } catch (const YAML::Exception&) {
      throw ConfigError(where + "." + key, "expected a number or a list of numbers");
    }
  }
  try {
    return list.as<std::vector<double>>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key, "expected a list of numbers");
  }
}

}  // namespace detail

inline Scenario parse_scenario(const YAML::Node& root) {
  using detail::read;
  detail::check_keys(root, "",
                     {"kind", "name", "geometry", "cable", "drag", "control", "initial_voltages", "target", "time",
                      "atlas", "validation"});
  Scenario sc;
  std::string kind = "reaching";
  read(root, "kind", "", kind);
  if (kind == "atlas") {
    sc.kind = ScenarioKind::atlas;
  } else if (kind == "reaching") {
    sc.kind = ScenarioKind::reaching;
  } else if (kind == "validation") {
    sc.kind = ScenarioKind::validation;
  } else {
    throw ConfigError("kind", "expected atlas, reaching or validation, got '" + kind + "'");
  }
  read(root, "name", "", sc.name);

  const YAML::Node g = root["geometry"];
  detail::check_keys(g, "geometry",
                     {"length", "elements", "base_radius", "tip_radius", "youngs_modulus", "density", "damping",
                      "max_couple", "rotational_damping"});
  read(g, "length", "geometry", sc.geometry.length);
  read(g, "elements", "geometry", sc.geometry.elements);
  read(g, "base_radius", "geometry", sc.geometry.base_radius);
  read(g, "tip_radius", "geometry", sc.geometry.tip_radius);
  read(g, "youngs_modulus", "geometry", sc.geometry.youngs_modulus);
  read(g, "density", "geometry", sc.geometry.density);
  read(g, "damping", "geometry", sc.geometry.damping);
  if (g && g["max_couple"] && !g["max_couple"].IsNull()) {
    double m = 0.0;
    read(g, "max_couple", "geometry", m);
    sc.geometry.max_couple = m;
  }
  if (g && g["rotational_damping"]) {
    std::string mode;
    read(g, "rotational_damping", "geometry", mode);
    if (mode == "literal") {
      sc.rotational_damping = RotationalDamping::literal;
    } else if (mode == "proportional") {
      sc.rotational_damping = RotationalDamping::proportional;
    } else {
      throw ConfigError("geometry.rotational_damping", "expected literal or proportional");
    }
  }

  const YAML::Node c = root["cable"];
  detail::check_keys(c, "cable", {"tau", "tau_tilde", "lambda", "b"});
  read(c, "tau", "cable", sc.cable.tau);
  read(c, "tau_tilde", "cable", sc.cable.tau_tilde);
  read(c, "lambda", "cable", sc.cable.lambda);
  read(c, "b", "cable", sc.cable.b);

  const YAML::Node d = root["drag"];
  detail::check_keys(d, "drag", {"c_tangential", "c_normal", "mode"});
  read(d, "c_tangential", "drag", sc.drag.c_tangential);
  read(d, "c_normal", "drag", sc.drag.c_normal);
  if (d && d["mode"]) {
    std::string mode;
    read(d, "mode", "drag", mode);
    if (mode == "linear") {
      sc.drag.mode = DragModel::Mode::linear;
    } else if (mode == "quadratic") {
      sc.drag.mode = DragModel::Mode::quadratic;
    } else {
      throw ConfigError("drag.mode", "expected linear or quadratic");
    }
  }

  const YAML::Node k = root["control"];
  detail::check_keys(k, "control", {"law", "mu", "mu_star", "beta", "epsilon", "current_cap"});
  if (k && k["law"]) {
    std::string law;
    read(k, "law", "control", law);
    sc.control.law = parse_control_law(law);
  }
  read(k, "mu", "control", sc.control.mu);
  read(k, "mu_star", "control", sc.control.mu_star);
  read(k, "beta", "control", sc.control.beta);
  read(k, "epsilon", "control", sc.control.epsilon);
  read(k, "current_cap", "control", sc.control.current_cap);

  const YAML::Node v = root["initial_voltages"];
  detail::check_keys(v, "initial_voltages", {"top_base", "top_tip", "bottom_base", "bottom_tip"});
  read(v, "top_base", "initial_voltages", sc.initial.top_base);
  read(v, "top_tip", "initial_voltages", sc.initial.top_tip);
  read(v, "bottom_base", "initial_voltages", sc.initial.bottom_base);
  read(v, "bottom_tip", "initial_voltages", sc.initial.bottom_tip);

  if (root["target"]) {
    const auto xy = detail::read_list(root, "target", "", {});
    if (xy.size() != 2) throw ConfigError("target", "expected [x, y]");
    sc.target = {xy[0], xy[1]};
  }

  const YAML::Node t = root["time"];
  detail::check_keys(t, "time", {"duration", "cadence", "dt", "mechanical_substeps"});
  read(t, "duration", "time", sc.time.duration);
  read(t, "cadence", "time", sc.time.cadence);
  read(t, "dt", "time", sc.time.dt);
  read(t, "mechanical_substeps", "time", sc.time.mechanical_substeps);

  const YAML::Node a = root["atlas"];
  detail::check_keys(a, "atlas", {"bottom_base", "bottom_tip", "top_base", "top_tip", "b"});
  read(a, "bottom_base", "atlas", sc.atlas.bottom_base);
  read(a, "bottom_tip", "atlas", sc.atlas.bottom_tip);
  sc.atlas.top_base = detail::read_list(a, "top_base", "atlas", sc.atlas.top_base);
  sc.atlas.top_tip = detail::read_list(a, "top_tip", "atlas", sc.atlas.top_tip);
  sc.atlas.b = detail::read_list(a, "b", "atlas", sc.atlas.b);

  const YAML::Node val = root["validation"];
  detail::check_keys(val, "validation", {"suites"});
  if (val && val["suites"]) {
    try {
      sc.suites = val["suites"].as<std::vector<std::string>>();
    } catch (const YAML::Exception&) {
      throw ConfigError("validation.suites", "expected a list of suite names");
    }
  }

  sc.validate();
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
  try {
    return parse_scenario(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", std::string("malformed YAML: ") + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("<file>", "cannot open '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", std::string("malformed YAML: ") + e.what());
  }
  return parse_scenario(root);
}

/// Canonical form: every key written, fixed order, shortest round-trip
/// number formatting.
inline std::string serialize_scenario(const Scenario& sc) {
  YAML::Emitter out;
  auto list = [&out](const std::vector<double>& xs) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : xs) out << format_number(x);
    out << YAML::EndSeq;
  };
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(sc.kind);
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << sc.name;

  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "length" << YAML::Value << format_number(sc.geometry.length);
  out << YAML::Key << "elements" << YAML::Value << sc.geometry.elements;
  out << YAML::Key << "base_radius" << YAML::Value << format_number(sc.geometry.base_radius);
  out << YAML::Key << "tip_radius" << YAML::Value << format_number(sc.geometry.tip_radius);
  out << YAML::Key << "youngs_modulus" << YAML::Value << format_number(sc.geometry.youngs_modulus);
  out << YAML::Key << "density" << YAML::Value << format_number(sc.geometry.density);
  out << YAML::Key << "damping" << YAML::Value << format_number(sc.geometry.damping);
  out << YAML::Key << "max_couple" << YAML::Value;
  if (sc.geometry.max_couple) {
    out << format_number(*sc.geometry.max_couple);
  } else {
    out << YAML::Null;
  }
  out << YAML::Key << "rotational_damping" << YAML::Value
      << (sc.rotational_damping == RotationalDamping::literal ? "literal" : "proportional");
  out << YAML::EndMap;

  out << YAML::Key << "cable" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tau" << YAML::Value << format_number(sc.cable.tau);
  out << YAML::Key << "tau_tilde" << YAML::Value << format_number(sc.cable.tau_tilde);
  out << YAML::Key << "lambda" << YAML::Value << format_number(sc.cable.lambda);
  out << YAML::Key << "b" << YAML::Value << format_number(sc.cable.b);
  out << YAML::EndMap;

  out << YAML::Key << "drag" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "c_tangential" << YAML::Value << format_number(sc.drag.c_tangential);
  out << YAML::Key << "c_normal" << YAML::Value << format_number(sc.drag.c_normal);
  out << YAML::Key << "mode" << YAML::Value << (sc.drag.mode == DragModel::Mode::linear ? "linear" : "quadratic");
  out << YAML::EndMap;

  out << YAML::Key << "control" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "law" << YAML::Value << to_string(sc.control.law);
  out << YAML::Key << "mu" << YAML::Value << format_number(sc.control.mu);
  out << YAML::Key << "mu_star" << YAML::Value << format_number(sc.control.mu_star);
  out << YAML::Key << "beta" << YAML::Value << format_number(sc.control.beta);
  out << YAML::Key << "epsilon" << YAML::Value << format_number(sc.control.epsilon);
  out << YAML::Key << "current_cap" << YAML::Value << format_number(sc.control.current_cap);
  out << YAML::EndMap;

  out << YAML::Key << "initial_voltages" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "top_base" << YAML::Value << format_number(sc.initial.top_base);
  out << YAML::Key << "top_tip" << YAML::Value << format_number(sc.initial.top_tip);
  out << YAML::Key << "bottom_base" << YAML::Value << format_number(sc.initial.bottom_base);
  out << YAML::Key << "bottom_tip" << YAML::Value << format_number(sc.initial.bottom_tip);
  out << YAML::EndMap;

  out << YAML::Key << "target" << YAML::Value;
  list({sc.target.x, sc.target.y});

  out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "duration" << YAML::Value << format_number(sc.time.duration);
  out << YAML::Key << "cadence" << YAML::Value << format_number(sc.time.cadence);
  out << YAML::Key << "dt" << YAML::Value << format_number(sc.time.dt);
  out << YAML::Key << "mechanical_substeps" << YAML::Value << sc.time.mechanical_substeps;
  out << YAML::EndMap;

  out << YAML::Key << "atlas" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bottom_base" << YAML::Value << format_number(sc.atlas.bottom_base);
  out << YAML::Key << "bottom_tip" << YAML::Value << format_number(sc.atlas.bottom_tip);
  out << YAML::Key << "top_base" << YAML::Value;
  list(sc.atlas.top_base);
  out << YAML::Key << "top_tip" << YAML::Value;
  list(sc.atlas.top_tip);
  out << YAML::Key << "b" << YAML::Value;
  list(sc.atlas.b);
  out << YAML::EndMap;

  out << YAML::Key << "validation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "suites" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& s : sc.suites) out << s;
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace octoarm
