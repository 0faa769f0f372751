#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "qamp/serialize.hpp"
#include "run_config.hpp"

namespace qamp::cli {

struct CommandResult {
  Table table;
  nlohmann::json summary = nlohmann::json::object();
  /// Set when a run stopped early (truncation unsafe); the partial result is
  /// still written and the process exits with the numeric failure code.
  std::string failure;
};

/// Runs cfg.command. Library domain errors surface as config_error; numeric
/// failures (quadrature, truncation) propagate as qamp::numeric_failure.
CommandResult run_command(const RunConfig& cfg);

CommandResult cmd_gain(const RunConfig& cfg);
CommandResult cmd_noise(const RunConfig& cfg);
CommandResult cmd_mandel(const RunConfig& cfg);
CommandResult cmd_squeezing(const RunConfig& cfg);
CommandResult cmd_wigner(const RunConfig& cfg);
CommandResult cmd_thermal(const RunConfig& cfg);
CommandResult cmd_oracle(const RunConfig& cfg);

/// Writes the result. csv: table to cfg.out_path (or `fallback`) plus a
/// `<path>.json` sidecar with the resolved config and summary. json: one
/// document {config, columns, rows, summary}.
void write_result(const RunConfig& cfg, const CommandResult& res,
                  std::ostream& fallback);

}  // namespace qamp::cli
