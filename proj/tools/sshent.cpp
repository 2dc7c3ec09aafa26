// Command-line driver: sweeps and curves for the SSH-ladder toolkit, written
// as CSV plus a JSON manifest.
//
// Exit status: 0 success, 1 runtime failure, 2 configuration error.

#include "sshent/cli/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using sshent::cli::ConfigError;
using sshent::cli::RunConfig;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<int> nk;
  std::optional<std::int64_t> seed;
  std::optional<int> legs;
  std::optional<int> cells;
  std::optional<double> J;
  std::vector<double> deltas;
  std::optional<double> z;
  std::optional<std::string> boundary;
  std::optional<std::string> symmetry;
  std::optional<double> beta;
  std::optional<double> kappa;
  std::optional<double> t_max;
  std::optional<int> t_steps;
  std::optional<int> theta_steps;
  std::optional<std::string> schedule;
  std::optional<std::string> measure;
  std::vector<std::string> axes;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--out", f.out, "output CSV path (manifest goes to <out>.manifest.json)");
  app->add_option("--workers", f.workers, "worker threads (default: available cores)");
  app->add_option("--nk", f.nk, "Brillouin-zone grid size");
  app->add_option("--seed", f.seed, "reserved; runs are deterministic");
  app->add_option("--legs", f.legs, "number of legs M");
  app->add_option("--cells", f.cells, "unit cells per leg L");
  app->add_option("--J", f.J, "hopping scale");
  app->add_option("--deltas", f.deltas, "dimerizations, comma separated")->delimiter(',');
  app->add_option("--z", f.z, "interchain hopping");
  app->add_option("--boundary", f.boundary, "open | periodic");
  app->add_option("--symmetry", f.symmetry, "S | S2 | S3");
  app->add_option("--beta", f.beta, "inverse temperature");
  app->add_option("--kappa", f.kappa, "protocol coupling");
  app->add_option("--t-max", f.t_max, "protocol final time");
  app->add_option("--t-steps", f.t_steps, "protocol time points");
  app->add_option("--theta-steps", f.theta_steps, "CHSH angle points on [0, pi]");
  app->add_option("--schedule", f.schedule, "a_prime_triple | b_prime_triple");
  app->add_option("--measure", f.measure, "negativity | formation");
  app->add_option("--axis", f.axes, "sweep axis name:min:max:steps (repeat for a second axis)");
}

RunConfig resolve(const Flags& f, const std::string& mode) {
  RunConfig c;
  if (!f.config.empty()) apply_json(c, sshent::cli::read_json_file(f.config));
  if (!mode.empty()) c.mode = mode;
  if (f.out) c.output = *f.out;
  if (f.workers) {
    if (*f.workers < 1) throw ConfigError("--workers must be >= 1");
    c.workers = static_cast<unsigned>(*f.workers);
  }
  if (f.nk) c.n_k = *f.nk;
  if (f.seed) c.seed = *f.seed;
  if (f.legs) {
    c.model.legs = *f.legs;
    // A new leg count without explicit deltas repeats the first delta.
    if (f.deltas.empty()) c.model.deltas.assign(static_cast<std::size_t>(std::max(*f.legs, 0)), c.model.deltas.front());
  }
  if (f.cells) c.model.cells = *f.cells;
  if (f.J) c.model.J = *f.J;
  if (!f.deltas.empty()) c.model.deltas = f.deltas;
  if (f.z) c.model.z = *f.z;
  sshent::cli::json overrides = sshent::cli::json::object();
  if (f.boundary) overrides["model"] = {{"boundary", *f.boundary}};
  if (f.symmetry) overrides["symmetry"] = *f.symmetry;
  if (f.schedule) overrides["schedule"] = *f.schedule;
  if (f.measure) overrides["measure"] = *f.measure;
  apply_json(c, overrides);
  if (f.beta) c.beta = *f.beta;
  if (f.kappa) c.kappa = *f.kappa;
  if (f.t_max) c.t_max = *f.t_max;
  if (f.t_steps) c.t_steps = *f.t_steps;
  if (f.theta_steps) c.theta_steps = *f.theta_steps;
  if (!f.axes.empty()) {
    c.axes.clear();
    for (const auto& a : f.axes) c.axes.push_back(sshent::cli::parse_axis_spec(a));
  }
  sshent::cli::validate_config(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSH-ladder topology, edge entanglement and Bell tests"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, std::string>> subs;
  for (const auto& mode : sshent::cli::known_modes()) {
    auto* sub = app.add_subcommand(mode, "run mode '" + mode + "'");
    add_common(sub, flags);
    subs.emplace_back(sub, mode);
  }
  auto* validate = app.add_subcommand("validate", "check a config and print the resolved settings");
  add_common(validate, flags);
  std::string positional_config;
  validate->add_option("path", positional_config, "config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      if (flags.config.empty()) flags.config = positional_config;
      const RunConfig c = resolve(flags, "");
      std::cout << "OK\n" << sshent::cli::to_json(c).dump(2) << "\n";
      return 0;
    }
    for (const auto& [sub, mode] : subs) {
      if (!sub->parsed()) continue;
      const RunConfig c = resolve(flags, mode);
      const std::size_t rows = sshent::cli::run(c);
      std::cout << "wrote " << rows << " rows to " << c.output << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
