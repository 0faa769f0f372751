#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qamp/input_field.hpp"

namespace qamp::cli {

/// Bad configuration (exit code 2). `where` names the offending field or
/// file position.
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what) {}
};

struct GridConfig {
  std::optional<double> re_min, re_max, im_min, im_max;
  int points = 256;
  double coverage_sigmas = 6.0;
};

struct RunConfig {
  std::string command;

  // amplifier; a list of aprime values is a sweep
  std::vector<double> aprime{1.0};
  std::optional<double> bprime;
  std::optional<double> nb;  ///< medium occupation B/A; used when bprime unset
  double tau0 = 0.0;
  double phase_rate = 0.0;       ///< omega0 / epsilon
  std::optional<double> omega0;  ///< rad/s; switches temperatures to kelvin

  InputField input{Coherent{}};
  std::optional<double> input_temperature;  ///< thermal input given by T

  double tau_start = 0.0;
  double tau_end = 10.0;
  int samples = 201;

  std::string out_path;  ///< empty: stdout
  std::string format = "csv";

  // command options
  int scan_points = 2000;               // mandel, squeezing
  std::vector<double> times{0.0};       // wigner
  int p_order = 0;                      // wigner
  bool rotating_frame = false;          // wigner
  GridConfig grid;                      // wigner
  double rate_from = 10.0;              // thermal
  double rate_to = 14.0;                // thermal
  std::optional<int> truncation;        // oracle; default from sizing rule
  double step = 1e-4;                   // oracle
  double record_every = 0.1;            // oracle

  /// B' for one aprime of the sweep.
  double bprime_for(double a) const { return bprime ? *bprime : a * nb.value_or(0.0); }
};

/// Overlays a JSON document onto cfg. `source` prefixes diagnostics.
void apply_json(RunConfig& cfg, const nlohmann::json& doc,
                const std::string& source);

/// Reads a JSON file, reporting parse errors with line and column.
nlohmann::json load_json_file(const std::string& path);

/// Path of a shipped preset by name.
std::string preset_path(const std::string& name);

/// Parses --input coherent:RE,IM | fock:N | squeezed:R,PHI | thermal:NBAR.
InputField parse_input_spec(const std::string& spec);

/// Checks cross-field invariants; throws config_error.
void validate(const RunConfig& cfg);

/// Fully resolved configuration, defaults included.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace qamp::cli
