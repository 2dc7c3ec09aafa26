#pragma once

// Execution of a RunConfig: sweeps over zero, one or two axes (row-major,
// first axis slowest) or, without axes, the natural curve of the mode
// (theta for CHSH, time for the protocol).

#include "sshent/cli/config.hpp"
#include "sshent/cli/csv.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>

namespace sshent::cli {

inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

using Row = std::vector<Cell>;

inline Cell opt(const std::optional<double>& v) { return v; }

inline std::vector<std::string> point_columns(const std::string& mode) {
  if (mode == "invariant") return {"I", "raw", "residual", "gap", "I_projector", "I_analytic"};
  if (mode == "phase-diagram") return {"I"};
  if (mode == "entanglement-map") return {"E_op", "E_neg", "E_F", "p11", "E_n"};
  if (mode == "number-entropy-map") return {"E_n", "p11"};
  if (mode == "chsh" || mode == "thermal-chsh") return {"sigma_max", "theta_max"};
  if (mode == "protocol") return {"F1_min", "F2_max"};
  throw ConfigError("unknown mode '" + mode + "'");
}

inline Row invariant_row(const RunConfig& c, bool full) {
  const int n_cols = full ? 6 : 1;
  Row r(static_cast<std::size_t>(n_cols));
  try {
    const InvariantResult g = winding_green(c.model, c.symmetry, c.n_k);
    r[0] = g.value;
    if (full) {
      r[1] = g.raw;
      r[2] = g.residual;
      r[3] = g.gap;
    }
  } catch (const Error&) {
  }
  if (full) {
    try {
      r[4] = winding_projector(c.model, c.symmetry, c.n_k).value;
    } catch (const Error&) {
    }
    if (c.symmetry == SymmetryKind::S) {
      if (const auto a = winding_analytic(c.model)) r[5] = *a;
    }
  }
  return r;
}

inline std::pair<Cell, Cell> scan_maximum(const std::vector<ChshPoint>& scan) {
  Cell best, where;
  for (const auto& p : scan) {
    if (p.sigma && (!best || *p.sigma > *best)) {
      best = p.sigma;
      where = p.theta;
    }
  }
  return {best, where};
}

inline CorrelationMatrix mode_state(const RunConfig& c) {
  const RMatrix h = real_space_hamiltonian(c.model);
  return c.mode == "thermal-chsh" ? thermal_correlations(h, c.beta) : ground_state_correlations(h);
}

// One summary row per sweep point. Library errors leave cells empty.
inline Row point_row(const RunConfig& c) {
  const std::size_t n = point_columns(c.mode).size();
  if (c.mode == "invariant") return invariant_row(c, true);
  if (c.mode == "phase-diagram") return invariant_row(c, false);
  Row r(n);
  try {
    const EdgeSelection sel = resolve_edges(c);
    if (c.mode == "entanglement-map" || c.mode == "number-entropy-map") {
      const CorrelationMatrix C = mode_state(c);
      const NumberDistribution d = joint_number_distribution(C, sel);
      if (c.mode == "number-entropy-map") return {number_entropy(d), d(1, 1)};
      r[0] = 0.0;  // an empty (1,1) sector carries no operational entanglement
      r[3] = d(1, 1);
      r[4] = number_entropy(d);
      try {
        const ProjectedDensityMatrix pdm = projected_density_matrix(C, sel);
        const double eneg = log_negativity(pdm.rho);
        const double ef = entanglement_of_formation(pdm.rho);
        r[0] = pdm.weight * (c.measure == EntanglementMeasure::negativity ? eneg : ef);
        r[1] = eneg;
        r[2] = ef;
      } catch (const EmptySector&) {
      }
      return r;
    }
    if (c.mode == "chsh" || c.mode == "thermal-chsh") {
      const auto [best, where] = scan_maximum(chsh_scan(mode_state(c), sel, theta_grid(c.theta_steps), c.schedule));
      return {best, where};
    }
    if (c.mode == "protocol") {
      const ProtocolResult pr = rotation_protocol(c.model, sel, c.kappa, time_grid(c.t_max, c.t_steps));
      return {*std::min_element(pr.F1.begin(), pr.F1.end()), *std::max_element(pr.F2.begin(), pr.F2.end())};
    }
  } catch (const Error&) {
  }
  return r;
}

inline Table curve_table(const RunConfig& c) {
  Table t;
  const EdgeSelection sel = resolve_edges(c);
  if (c.mode == "chsh" || c.mode == "thermal-chsh") {
    t.header = {"theta", "sigma"};
    for (const auto& p : chsh_scan(mode_state(c), sel, theta_grid(c.theta_steps), c.schedule)) {
      t.rows.push_back({p.theta, p.sigma});
    }
    return t;
  }
  t.header = {"t", "F1", "F2"};
  const ProtocolResult pr = rotation_protocol(c.model, sel, c.kappa, time_grid(c.t_max, c.t_steps), c.workers);
  for (std::size_t i = 0; i < pr.times.size(); ++i) t.rows.push_back({pr.times[i], pr.F1[i], pr.F2[i]});
  return t;
}

}  // namespace detail

/// Compute the output table of a validated configuration.
inline Table run_table(const RunConfig& c) {
  validate_config(c);
  const bool curve = c.axes.empty() && (c.mode == "chsh" || c.mode == "thermal-chsh" || c.mode == "protocol");
  if (curve) return detail::curve_table(c);

  std::vector<std::vector<double>> values;
  for (const auto& a : c.axes) values.push_back(a.values());
  std::size_t n_points = 1;
  for (const auto& v : values) n_points *= v.size();

  Table t;
  for (const auto& a : c.axes) t.header.push_back(a.parameter);
  for (const auto& col : detail::point_columns(c.mode)) t.header.push_back(col);

  const auto rows = parallel_map(n_points, c.workers, [&](std::size_t idx) {
    RunConfig local = c;
    detail::Row row;
    std::size_t rest = idx;
    std::vector<double> coords(values.size());
    for (std::size_t a = values.size(); a-- > 0;) {
      coords[a] = values[a][rest % values[a].size()];
      rest /= values[a].size();
    }
    for (std::size_t a = 0; a < values.size(); ++a) {
      set_axis_parameter(local, c.axes[a].parameter, coords[a]);
      row.push_back(coords[a]);
    }
    const detail::Row r = detail::point_row(local);
    row.insert(row.end(), r.begin(), r.end());
    return row;
  });
  t.rows = rows;
  return t;
}

inline std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Run, write the CSV and its manifest. Returns the number of data rows.
inline std::size_t run(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_timestamp();
  const Table t = run_table(c);
  write_file(c.output, t);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"tool", "sshent"},
                {"version", kToolVersion},
                {"started_at", started},
                {"wall_time_seconds", wall},
                {"rows", t.rows.size()},
                {"columns", t.header},
                {"config", to_json(c)}};
  std::ofstream out(manifest_path(c.output));
  if (!out) throw std::runtime_error("cannot write '" + manifest_path(c.output) + "'");
  out << manifest.dump(2) << "\n";
  return t.rows.size();
}

}  // namespace sshent::cli
