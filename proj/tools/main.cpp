// qamp: data files for the transient amplifier.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure
// (quadrature did not converge, truncation unsafe / trace drift).

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qamp/errors.hpp"

namespace {

using qamp::cli::RunConfig;

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct Overrides {
  std::string preset, config, out, format, input;
  std::vector<double> aprime;
  std::optional<double> bprime, nb, tau0, tau_start, tau_end, phase_rate, omega0;
  std::optional<int> samples, scan_points, p_order, points, truncation;
  std::optional<double> step, record_every;
  std::vector<double> times;
  bool rotating_frame = false;
};

RunConfig defaults_for(const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  if (command == "mandel") cfg.input = qamp::Fock{5};
  if (command == "squeezing") cfg.input = qamp::Squeezed{1.0, 0.0, {}};
  if (command == "thermal") cfg.input = qamp::Thermal{1.0};
  return cfg;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--preset", o.preset, "shipped preset name (fig1 ... fig5, ...)");
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--aprime", o.aprime, "A' value(s); several values run a sweep");
  cmd->add_option("--bprime", o.bprime, "B'");
  cmd->add_option("--nb", o.nb, "medium occupation n_B = B/A");
  cmd->add_option("--tau0", o.tau0, "inversion time tau0");
  cmd->add_option("--tau-start", o.tau_start, "first sample time");
  cmd->add_option("--tau-end", o.tau_end, "last sample time");
  cmd->add_option("--samples", o.samples, "number of time samples (>= 2)");
  cmd->add_option("--phase-rate", o.phase_rate, "omega0 / epsilon");
  cmd->add_option("--omega0", o.omega0, "omega0 in rad/s (temperatures in K)");
  cmd->add_option("--input", o.input,
                  "coherent:RE,IM | fock:N | squeezed:R,PHI | thermal:NBAR");
}

RunConfig resolve(const std::string& subcommand, const Overrides& o) {
  using qamp::cli::config_error;
  std::vector<std::pair<nlohmann::json, std::string>> docs;
  if (!o.preset.empty()) {
    const std::string path = qamp::cli::preset_path(o.preset);
    docs.emplace_back(qamp::cli::load_json_file(path), path);
  }
  if (!o.config.empty()) docs.emplace_back(qamp::cli::load_json_file(o.config), o.config);

  std::string command = subcommand == "run" ? "" : subcommand;
  for (const auto& [doc, src] : docs) {
    if (!doc.is_object() || !doc.contains("command")) continue;
    if (!doc["command"].is_string()) throw config_error(src + ".command", "expected a string");
    const std::string c = doc["command"].get<std::string>();
    if (!command.empty() && c != command) {
      throw config_error(src + ".command",
                         "is \"" + c + "\" but the subcommand is \"" + command + "\"");
    }
    command = c;
  }
  if (command.empty()) throw config_error("run", "needs --preset or --config naming a command");

  RunConfig cfg = defaults_for(command);
  for (const auto& [doc, src] : docs) qamp::cli::apply_json(cfg, doc, src);
  cfg.command = command;

  if (!o.out.empty()) cfg.out_path = o.out;
  if (!o.format.empty()) cfg.format = o.format;
  if (!o.aprime.empty()) cfg.aprime = o.aprime;
  if (o.bprime && o.nb) throw config_error("--bprime/--nb", "give only one");
  if (o.bprime) {
    cfg.bprime = o.bprime;
    cfg.nb.reset();
  }
  if (o.nb) {
    cfg.nb = o.nb;
    cfg.bprime.reset();
  }
  if (o.tau0) cfg.tau0 = *o.tau0;
  if (o.tau_start) cfg.tau_start = *o.tau_start;
  if (o.tau_end) cfg.tau_end = *o.tau_end;
  if (o.samples) cfg.samples = *o.samples;
  if (o.phase_rate) cfg.phase_rate = *o.phase_rate;
  if (o.omega0) cfg.omega0 = o.omega0;
  if (!o.input.empty()) {
    cfg.input = qamp::cli::parse_input_spec(o.input);
    cfg.input_temperature.reset();
  }
  if (o.scan_points) cfg.scan_points = *o.scan_points;
  if (!o.times.empty()) cfg.times = o.times;
  if (o.p_order) cfg.p_order = *o.p_order;
  if (o.points) cfg.grid.points = *o.points;
  if (o.rotating_frame) cfg.rotating_frame = true;
  if (o.truncation) cfg.truncation = o.truncation;
  if (o.step) cfg.step = *o.step;
  if (o.record_every) cfg.record_every = *o.record_every;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient linear amplifier: gain, noise, statistics and phase-space data"};
  app.require_subcommand(1);
  Overrides o;

  const std::map<std::string, std::string> commands{
      {"gain", "gain G and gain factor W over time"},
      {"noise", "noise width, added noise, output fluctuations"},
      {"mandel", "photon number and Mandel Q, with the Q = 0 crossing"},
      {"squeezing", "quadrature variances of a squeezed input"},
      {"wigner", "quasiprobability grids at chosen times"},
      {"thermal", "temperature, entropy and population ratio of a thermal input"},
      {"oracle", "truncated Fock-space integration against the analytic moments"},
      {"run", "run the command named by a preset or config file"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    subs[name] = sub;
  }
  for (const char* name : {"mandel", "squeezing", "run"}) {
    subs[name]->add_option("--scan-points", o.scan_points, "samples for the crossing scan");
  }
  for (const char* name : {"wigner", "run"}) {
    subs[name]->add_option("--times", o.times, "grid times");
    subs[name]->add_option("--p-order", o.p_order, "-1 Q, 0 Wigner, 1 P");
    subs[name]->add_option("--points", o.points, "grid points per axis");
    subs[name]->add_flag("--rotating-frame", o.rotating_frame, "drop the field phase");
  }
  for (const char* name : {"oracle", "run"}) {
    subs[name]->add_option("--truncation", o.truncation, "Fock levels N");
    subs[name]->add_option("--step", o.step, "RK4 step");
    subs[name]->add_option("--record-every", o.record_every, "tau between samples");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  std::string chosen;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) chosen = name;
  }

  try {
    const RunConfig cfg = resolve(chosen, o);
    const auto res = qamp::cli::run_command(cfg);
    qamp::cli::write_result(cfg, res, std::cout);
    if (!res.failure.empty()) {
      std::cerr << "qamp: numeric failure: " << res.failure << '\n';
      return exit_numeric;
    }
  } catch (const qamp::cli::config_error& e) {
    std::cerr << "qamp: config error: " << e.what() << '\n';
    return exit_config;
  } catch (const qamp::numeric_failure& e) {
    std::cerr << "qamp: numeric failure: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qamp: config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::domain_error& e) {
    std::cerr << "qamp: config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "qamp: numeric failure: " << e.what() << '\n';
    return exit_numeric;
  }
  return 0;
}
