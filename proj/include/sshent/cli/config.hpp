#pragma once

// Run configuration for the command-line driver. The file format is JSON;
// unknown keys are rejected so that typos never silently fall back to a
// default. Legs and cells in the "edges" block are 1-based, like the
// parameter names delta1, delta2, ...

#include "sshent/bell.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace sshent::cli {

using json = nlohmann::ordered_json;

/// Anything wrong with the configuration itself (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes{"invariant",  "phase-diagram", "entanglement-map", "number-entropy-map",
                                              "chsh",       "thermal-chsh",  "protocol"};
  return modes;
}

struct SiteSpec {
  Sublattice sublattice = Sublattice::a;
  int leg = 1;   // 1-based
  int cell = 1;  // 1-based
};

struct EdgeSpec {
  SiteSpec A1, A2, B1, B2;
};

struct RunConfig {
  std::string mode = "invariant";
  LadderParams model{3, 16, 1.0, {0.9, -0.75, 0.8}, 0.9, Boundary::open};
  std::vector<Axis> axes;
  SymmetryKind symmetry = SymmetryKind::S;
  int n_k = 256;
  double beta = 1000.0;
  double kappa = 10.0;
  double t_max = 20.0;
  int t_steps = 200;
  int theta_steps = 181;
  AngleSchedule schedule = AngleSchedule::a_prime_triple;
  EntanglementMeasure measure = EntanglementMeasure::negativity;
  std::optional<EdgeSpec> edges;
  std::string output = "out.csv";
  unsigned workers = default_workers();
  std::optional<std::int64_t> seed;  // reserved; every computation is deterministic
};

/// Parameters an axis may sweep besides the ladder parameters.
inline bool is_run_parameter(const std::string& name) { return name == "beta" || name == "kappa"; }

inline bool is_axis_parameter(const RunConfig& c, const std::string& name) {
  return is_run_parameter(name) || is_ladder_parameter(c.model, name);
}

/// Apply an axis value to a copy of the configuration.
inline void set_axis_parameter(RunConfig& c, const std::string& name, double value) {
  if (name == "beta") {
    c.beta = value;
  } else if (name == "kappa") {
    c.kappa = value;
  } else {
    set_ladder_parameter(c.model, name, value);
  }
}

inline EdgeSelection resolve_edges(const RunConfig& c) {
  if (!c.edges) return EdgeSelection::default_for(c.model);
  auto idx = [&c](const SiteSpec& s) { return mode_index(c.model, s.sublattice, s.leg - 1, s.cell - 1); };
  return EdgeSelection{idx(c.edges->A1), idx(c.edges->A2), idx(c.edges->B1), idx(c.edges->B2)};
}

/// Throws ConfigError describing the first problem found.
inline void validate_config(const RunConfig& c) {
  if (std::find(known_modes().begin(), known_modes().end(), c.mode) == known_modes().end()) {
    throw ConfigError("unknown mode '" + c.mode + "'");
  }
  try {
    c.model.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (c.axes.size() > 2) throw ConfigError("at most two axes are supported");
  for (const auto& a : c.axes) {
    if (!is_axis_parameter(c, a.parameter)) throw ConfigError("axis names unknown parameter '" + a.parameter + "'");
    if (a.steps < 1) throw ConfigError("axis '" + a.parameter + "': steps must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError("axis '" + a.parameter + "': bounds must be finite");
  }
  if (c.mode == "phase-diagram" && c.axes.size() != 2) throw ConfigError("phase-diagram needs exactly two axes");
  if ((c.mode == "entanglement-map" || c.mode == "number-entropy-map") && c.axes.empty()) {
    throw ConfigError(c.mode + " needs at least one axis");
  }
  if (c.n_k < 4) throw ConfigError("n_k must be >= 4");
  if (!(c.beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (!std::isfinite(c.kappa)) throw ConfigError("kappa must be finite");
  if (!(c.t_max >= 0.0) || c.t_steps < 1) throw ConfigError("time grid needs t_max >= 0 and t_steps >= 1");
  if (c.theta_steps < 2) throw ConfigError("theta_steps must be >= 2");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.output.empty()) throw ConfigError("output path is empty");
  const bool needs_edges = c.mode != "invariant" && c.mode != "phase-diagram";
  if (needs_edges) {
    try {
      resolve_edges(c).validate(static_cast<Eigen::Index>(c.model.n_modes()));
    } catch (const Error& e) {
      throw ConfigError(std::string("edges: ") + e.what());
    }
  }
}

namespace detail {

inline void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}

inline Sublattice sublattice_from_string(const std::string& s) {
  if (s == "a") return Sublattice::a;
  if (s == "b") return Sublattice::b;
  throw ConfigError("sublattice must be 'a' or 'b', got '" + s + "'");
}

inline Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw ConfigError("boundary must be 'open' or 'periodic', got '" + s + "'");
}

inline EntanglementMeasure measure_from_string(const std::string& s) {
  if (s == "negativity") return EntanglementMeasure::negativity;
  if (s == "formation") return EntanglementMeasure::formation;
  throw ConfigError("measure must be 'negativity' or 'formation', got '" + s + "'");
}

inline std::string to_string(EntanglementMeasure m) {
  return m == EntanglementMeasure::negativity ? "negativity" : "formation";
}

inline SiteSpec parse_site(const json& j, const std::string& where) {
  check_keys(j, {"sublattice", "leg", "cell"}, where);
  SiteSpec s;
  if (j.contains("sublattice")) s.sublattice = sublattice_from_string(get_as<std::string>(j["sublattice"], "sublattice"));
  if (j.contains("leg")) s.leg = get_as<int>(j["leg"], "leg");
  if (j.contains("cell")) s.cell = get_as<int>(j["cell"], "cell");
  return s;
}

inline json site_json(const SiteSpec& s) {
  return json{{"sublattice", s.sublattice == Sublattice::a ? "a" : "b"}, {"leg", s.leg}, {"cell", s.cell}};
}

}  // namespace detail

/// Parse "name:min:max:steps".
inline Axis parse_axis_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw ConfigError("axis '" + spec + "' must look like name:min:max:steps");
  try {
    std::size_t used = 0;
    Axis a{parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3], &used)};
    if (used != parts[3].size()) throw std::invalid_argument("steps");
    return a;
  } catch (const std::logic_error&) {
    throw ConfigError("axis '" + spec + "' has a malformed number");
  }
}

/// Overlay a JSON document onto `c`.
inline void apply_json(RunConfig& c, const json& j) {
  using detail::get_as;
  detail::check_keys(j,
                     {"mode", "model", "axes", "symmetry", "n_k", "beta", "kappa", "times", "thetas", "schedule",
                      "measure", "edges", "output", "workers", "seed"},
                     "config");
  if (j.contains("mode")) c.mode = get_as<std::string>(j["mode"], "mode");
  if (j.contains("model")) {
    const json& m = j["model"];
    detail::check_keys(m, {"legs", "cells", "J", "deltas", "z", "boundary"}, "model");
    if (m.contains("legs")) c.model.legs = get_as<int>(m["legs"], "legs");
    if (m.contains("cells")) c.model.cells = get_as<int>(m["cells"], "cells");
    if (m.contains("J")) c.model.J = get_as<double>(m["J"], "J");
    if (m.contains("z")) c.model.z = get_as<double>(m["z"], "z");
    if (m.contains("deltas")) c.model.deltas = get_as<std::vector<double>>(m["deltas"], "deltas");
    if (m.contains("boundary")) c.model.boundary = detail::boundary_from_string(get_as<std::string>(m["boundary"], "boundary"));
  }
  if (j.contains("axes")) {
    if (!j["axes"].is_array()) throw ConfigError("axes must be an array");
    c.axes.clear();
    for (const auto& a : j["axes"]) {
      detail::check_keys(a, {"parameter", "min", "max", "steps"}, "axes entry");
      for (const char* k : {"parameter", "min", "max", "steps"}) {
        if (!a.contains(k)) throw ConfigError(std::string("axes entry is missing '") + k + "'");
      }
      c.axes.push_back(Axis{get_as<std::string>(a["parameter"], "parameter"), get_as<double>(a["min"], "min"),
                            get_as<double>(a["max"], "max"), get_as<int>(a["steps"], "steps")});
    }
  }
  if (j.contains("symmetry")) {
    try {
      c.symmetry = symmetry_from_string(get_as<std::string>(j["symmetry"], "symmetry"));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("n_k")) c.n_k = get_as<int>(j["n_k"], "n_k");
  if (j.contains("beta")) c.beta = get_as<double>(j["beta"], "beta");
  if (j.contains("kappa")) c.kappa = get_as<double>(j["kappa"], "kappa");
  if (j.contains("times")) {
    detail::check_keys(j["times"], {"t_max", "steps"}, "times");
    if (j["times"].contains("t_max")) c.t_max = get_as<double>(j["times"]["t_max"], "t_max");
    if (j["times"].contains("steps")) c.t_steps = get_as<int>(j["times"]["steps"], "steps");
  }
  if (j.contains("thetas")) {
    detail::check_keys(j["thetas"], {"steps"}, "thetas");
    if (j["thetas"].contains("steps")) c.theta_steps = get_as<int>(j["thetas"]["steps"], "steps");
  }
  if (j.contains("schedule")) {
    try {
      c.schedule = schedule_from_string(get_as<std::string>(j["schedule"], "schedule"));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("measure")) c.measure = detail::measure_from_string(get_as<std::string>(j["measure"], "measure"));
  if (j.contains("edges")) {
    const json& e = j["edges"];
    detail::check_keys(e, {"A1", "A2", "B1", "B2"}, "edges");
    for (const char* k : {"A1", "A2", "B1", "B2"}) {
      if (!e.contains(k)) throw ConfigError(std::string("edges is missing '") + k + "'");
    }
    c.edges = EdgeSpec{detail::parse_site(e["A1"], "edges.A1"), detail::parse_site(e["A2"], "edges.A2"),
                       detail::parse_site(e["B1"], "edges.B1"), detail::parse_site(e["B2"], "edges.B2")};
  }
  if (j.contains("output")) c.output = get_as<std::string>(j["output"], "output");
  if (j.contains("workers")) {
    const int w = get_as<int>(j["workers"], "workers");
    if (w < 1) throw ConfigError("workers must be >= 1");
    c.workers = static_cast<unsigned>(w);
  }
  if (j.contains("seed")) c.seed = get_as<std::int64_t>(j["seed"], "seed");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

/// Fully resolved configuration, suitable for the manifest and `validate`.
inline json to_json(const RunConfig& c) {
  json axes = json::array();
  for (const auto& a : c.axes) axes.push_back({{"parameter", a.parameter}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  json j{{"mode", c.mode},
         {"model",
          {{"legs", c.model.legs},
           {"cells", c.model.cells},
           {"J", c.model.J},
           {"deltas", c.model.deltas},
           {"z", c.model.z},
           {"boundary", c.model.boundary == Boundary::open ? "open" : "periodic"}}},
         {"axes", axes},
         {"symmetry", to_string(c.symmetry)},
         {"n_k", c.n_k},
         {"beta", c.beta},
         {"kappa", c.kappa},
         {"times", {{"t_max", c.t_max}, {"steps", c.t_steps}}},
         {"thetas", {{"steps", c.theta_steps}}},
         {"schedule", to_string(c.schedule)},
         {"measure", detail::to_string(c.measure)}};
  if (c.edges) {
    j["edges"] = {{"A1", detail::site_json(c.edges->A1)},
                  {"A2", detail::site_json(c.edges->A2)},
                  {"B1", detail::site_json(c.edges->B1)},
                  {"B2", detail::site_json(c.edges->B2)}};
  }
  j["output"] = c.output;
  j["workers"] = c.workers;
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

}  // namespace sshent::cli
