#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "qamp/qamp.hpp"

namespace qamp::cli {

using nlohmann::json;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json number_or_null(const std::optional<double>& v) {
  return v ? number_or_null(*v) : json(nullptr);
}

std::vector<double> tau_grid(const RunConfig& cfg) {
  std::vector<double> t(static_cast<std::size_t>(cfg.samples));
  for (int i = 0; i < cfg.samples; ++i) {
    t[i] = i + 1 == cfg.samples
               ? cfg.tau_end
               : cfg.tau_start + (cfg.tau_end - cfg.tau_start) * i / (cfg.samples - 1);
  }
  return t;
}

AmplifierParams params_for(const RunConfig& cfg, double aprime) {
  return AmplifierParams::dimensionless(aprime, cfg.bprime_for(aprime), cfg.tau0,
                                        cfg.phase_rate);
}

UnitMode unit_mode(const RunConfig& cfg) {
  return cfg.omega0 ? UnitMode::kelvin : UnitMode::dimensionless;
}

/// Input with a temperature-specified thermal state resolved to its nbar.
InputField resolved_input(const RunConfig& cfg) {
  if (cfg.input_temperature) {
    const auto s = ThermalState::from_temperature(*cfg.input_temperature, unit_mode(cfg),
                                                  cfg.omega0.value_or(0.0));
    return Thermal{s.nbar_in()};
  }
  return cfg.input;
}

/// Runs fill(cell, table, summary) for every aprime of the sweep in parallel
/// and concatenates the per-cell tables in sweep order.
template <class Fill>
CommandResult sweep(const RunConfig& cfg, std::vector<std::string> columns, Fill&& fill) {
  const std::size_t cells = cfg.aprime.size();
  std::vector<Table> tables(cells, Table{columns, {}});
  std::vector<json> summaries(cells);
  parallel_for(cells, [&](std::size_t c) {
    summaries[c] = json::object();
    summaries[c]["aprime"] = cfg.aprime[c];
    fill(params_for(cfg, cfg.aprime[c]), tables[c], summaries[c]);
  });
  CommandResult res;
  res.table.columns = std::move(columns);
  for (auto& t : tables) {
    for (auto& r : t.rows) res.table.rows.push_back(std::move(r));
  }
  res.summary["cells"] = summaries;
  return res;
}

}  // namespace

CommandResult cmd_gain(const RunConfig& cfg) {
  const auto taus = tau_grid(cfg);
  return sweep(cfg, {"aprime", "tau", "G", "W"},
               [&](const AmplifierParams& p, Table& t, json& s) {
                 for (double tau : taus) {
                   t.add_row({p.aprime(), tau, gain(p, tau), gain_factor_w(p, tau)});
                 }
                 s["gain_at_tau0"] = gain(p, p.tau0());
                 s["gain_at_2tau0"] = gain(p, 2.0 * p.tau0());
               });
}

CommandResult cmd_noise(const RunConfig& cfg) {
  const auto taus = tau_grid(cfg);
  const InputField in = resolved_input(cfg);
  return sweep(cfg, {"aprime", "tau", "delta", "added_noise", "sym_fluct_out", "m", "G"},
               [&](const AmplifierParams& p, Table& t, json& s) {
                 for (double tau : taus) {
                   const NoiseRecord nr = noise_record(p, tau);
                   t.add_row({p.aprime(), tau, nr.delta, nr.added_noise,
                              nr.gain * input_sym_fluct(in) + nr.delta, nr.m_width,
                              nr.gain});
                 }
                 const double asym = asymptotic_added_noise(p);
                 const double caves = caves_limit(p.medium_occupation());
                 s["asymptotic_added_noise"] = asym;
                 s["caves_limit"] = caves;
                 s["above_caves_limit"] = asym >= caves;
               });
}

CommandResult cmd_mandel(const RunConfig& cfg) {
  const auto taus = tau_grid(cfg);
  const InputField in = resolved_input(cfg);
  return sweep(cfg, {"aprime", "tau", "mean_n", "Q", "G"},
               [&](const AmplifierParams& p, Table& t, json& s) {
                 for (double tau : taus) {
                   const MomentSet ms = output_moments(p, in, tau);
                   t.add_row({p.aprime(), tau, ms.mean_n,
                              ms.mandel_q.value_or(nan_value), ms.gain});
                 }
                 std::optional<double> tq;
                 if (cfg.tau_end > 0.0) {
                   tq = mandel_crossing_time(p, in, cfg.tau_end, cfg.scan_points);
                 }
                 s["tau_Q"] = number_or_null(tq);
                 s["gain_at_tau_Q"] = tq ? json(gain(p, *tq)) : json(nullptr);
               });
}

CommandResult cmd_squeezing(const RunConfig& cfg) {
  const auto taus = tau_grid(cfg);
  const Squeezed in = std::get<Squeezed>(cfg.input);
  return sweep(cfg, {"aprime", "tau", "var_u", "var_v", "retained", "G"},
               [&](const AmplifierParams& p, Table& t, json& s) {
                 for (double tau : taus) {
                   const MomentSet ms = output_moments(p, InputField{in}, tau);
                   t.add_row({p.aprime(), tau, ms.var_u, ms.var_v,
                              ms.var_u < 0.5 ? 1.0 : 0.0, ms.gain});
                 }
                 std::optional<double> lost;
                 if (cfg.tau_end > 0.0 && in.r > 0.0) {
                   lost = squeezing_loss_time(p, in, cfg.tau_end, cfg.scan_points);
                 }
                 s["loss_time"] = number_or_null(lost);
                 s["gain_at_loss"] = lost ? json(gain(p, *lost)) : json(nullptr);
               });
}

CommandResult cmd_wigner(const RunConfig& cfg) {
  const InputField in = resolved_input(cfg);
  GridOptions opt;
  opt.rotating_frame = cfg.rotating_frame;
  opt.points = cfg.grid.points;
  opt.coverage_sigmas = cfg.grid.coverage_sigmas;
  if (cfg.grid.re_min) {
    opt.spec = GridSpec{*cfg.grid.re_min, *cfg.grid.re_max, *cfg.grid.im_min,
                        *cfg.grid.im_max, cfg.grid.points, cfg.grid.points};
  }
  std::vector<std::string> columns{"aprime", "tau", "alpha_re", "alpha_im", "value"};
  const std::size_t nt = cfg.times.size();
  const std::size_t cells = cfg.aprime.size() * nt;
  std::vector<Table> tables(cells, Table{columns, {}});
  std::vector<json> summaries(cells);
  parallel_for(cells, [&](std::size_t c) {
    const double a = cfg.aprime[c / nt];
    const double tau = cfg.times[c % nt];
    const PhaseSpaceGrid g =
        quasiprobability_grid(params_for(cfg, a), in, tau, cfg.p_order, opt);
    for (std::size_t j = 0; j < g.n_im(); ++j) {
      for (std::size_t i = 0; i < g.n_re(); ++i) {
        tables[c].add_row({a, tau, g.re_axis()[i], g.im_axis()[j], g.at(i, j)});
      }
    }
    const complex m = g.mean();
    summaries[c] = {{"aprime", a},       {"tau", tau},
                    {"integral", g.integral()}, {"mean", {m.real(), m.imag()}},
                    {"max", g.max_value()}, {"min", g.min_value()}};
  });
  CommandResult res;
  res.table.columns = columns;
  for (auto& t : tables) {
    for (auto& r : t.rows) res.table.rows.push_back(std::move(r));
  }
  res.summary["p_order"] = cfg.p_order;
  res.summary["grids"] = summaries;
  return res;
}

CommandResult cmd_thermal(const RunConfig& cfg) {
  const auto taus = tau_grid(cfg);
  const ThermalState state = ThermalState::from_occupation(
      std::get<Thermal>(resolved_input(cfg)).nbar, unit_mode(cfg), cfg.omega0.value_or(0.0));
  CommandResult res =
      sweep(cfg, {"aprime", "tau", "mean_n", "T", "S", "N2_over_N1"},
            [&](const AmplifierParams& p, Table& t, json& s) {
              for (double tau : taus) {
                const double n = thermal_occupation(p, state, tau);
                t.add_row({p.aprime(), tau, n, state.temperature_of(n), entropy_of(n),
                           population_ratio(p, tau)});
              }
              s["entropy_rate"] = entropy_rate(p, state, cfg.rate_from, cfg.rate_to);
              s["initial_temperature"] = state.temperature_of(state.nbar_in());
            });
  res.summary["temperature_unit"] = cfg.omega0 ? "K" : "hbar*omega0/k_B";
  res.summary["rate_window"] = {cfg.rate_from, cfg.rate_to};
  return res;
}

CommandResult cmd_oracle(const RunConfig& cfg) {
  const InputField in = resolved_input(cfg);
  const auto taus = tau_grid(cfg);
  CommandResult res = sweep(
      cfg,
      {"aprime", "tau", "mean_a_re", "mean_a_im", "mean_n", "sym_fluct", "trace", "leakage",
       "analytic_mean_a_re", "analytic_mean_a_im", "analytic_mean_n", "analytic_sym_fluct"},
      [&](const AmplifierParams& p, Table& t, json& s) {
        int dim = 0;
        if (cfg.truncation) {
          dim = *cfg.truncation;
        } else {
          double n_max = 0.0;
          for (double tau : taus) n_max = std::max(n_max, mean_photon_number(p, in, tau));
          dim = suggested_truncation(n_max);
        }
        EvolveOptions opt;
        opt.record_every = cfg.record_every;
        const EvolutionResult run =
            evolve(DensityMatrix::from_input(dim, in), p, cfg.tau_end, cfg.step, opt);
        double d_a = 0.0, d_n = 0.0, d_f = 0.0;
        json series = json::array();
        for (const OracleSample& o : run.series) {
          // the integrator works in the interaction picture; put the field
          // phase back before comparing
          const complex a = o.mean_a * std::polar(1.0, -field_phase(p, o.tau));
          const MomentSet ms = output_moments(p, in, o.tau);
          t.add_row({p.aprime(), o.tau, a.real(), a.imag(), o.mean_n, o.sym_fluct(),
                     o.trace, o.leakage, ms.mean_a.real(), ms.mean_a.imag(), ms.mean_n,
                     ms.sym_fluct});
          d_a = std::max(d_a, std::abs(a - ms.mean_a));
          d_n = std::max(d_n, std::abs(o.mean_n - ms.mean_n));
          d_f = std::max(d_f, std::abs(o.sym_fluct() - ms.sym_fluct));
        }
        s["N"] = dim;
        s["step"] = cfg.step;
        s["tau_reached"] = run.tau_reached;
        s["completed"] = run.completed;
        s["truncation_unsafe"] = run.truncation_unsafe;
        s["max_trace_drift"] = run.max_trace_drift;
        s["max_leakage"] = run.max_leakage;
        s["analytic_deltas"] = {{"mean_a", d_a}, {"mean_n", d_n}, {"sym_fluct", d_f}};
      });
  for (const auto& cell : res.summary["cells"]) {
    if (cell["truncation_unsafe"].get<bool>()) {
      res.failure = "truncation unsafe at N = " + std::to_string(cell["N"].get<int>()) +
                    " for aprime = " + format_number(cell["aprime"].get<double>()) +
                    " (tau reached " + format_number(cell["tau_reached"].get<double>()) + ")";
      break;
    }
  }
  return res;
}

CommandResult run_command(const RunConfig& cfg) {
  validate(cfg);
  try {
    if (cfg.command == "gain") return cmd_gain(cfg);
    if (cfg.command == "noise") return cmd_noise(cfg);
    if (cfg.command == "mandel") return cmd_mandel(cfg);
    if (cfg.command == "squeezing") return cmd_squeezing(cfg);
    if (cfg.command == "wigner") return cmd_wigner(cfg);
    if (cfg.command == "thermal") return cmd_thermal(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
  } catch (const qamp::domain_error& e) {
    throw config_error(cfg.command, e.what());
  } catch (const qamp::grid_error& e) {
    throw config_error("options.grid", e.what());
  }
  throw config_error("command", "unknown command \"" + cfg.command + "\"");
}

void write_result(const RunConfig& cfg, const CommandResult& res, std::ostream& fallback) {
  const json config = to_json(cfg);
  auto open = [](const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("output.path", "cannot write " + path);
    return f;
  };
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& r : res.table.rows) {
      json row = json::array();
      for (double v : r) row.push_back(number_or_null(v));
      rows.push_back(std::move(row));
    }
    const json doc = {{"config", config},
                      {"columns", res.table.columns},
                      {"rows", std::move(rows)},
                      {"summary", res.summary}};
    if (cfg.out_path.empty()) {
      fallback << doc.dump(2) << '\n';
    } else {
      auto f = open(cfg.out_path);
      f << doc.dump(2) << '\n';
    }
    return;
  }
  if (cfg.out_path.empty()) {
    write_csv(fallback, res.table);
    return;
  }
  {
    auto f = open(cfg.out_path);
    write_csv(f, res.table);
  }
  auto side = open(cfg.out_path + ".json");
  const json meta = {{"config", config},
                     {"columns", res.table.columns},
                     {"data", cfg.out_path},
                     {"summary", res.summary}};
  side << meta.dump(2) << '\n';
}

}  // namespace qamp::cli
