#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "softsense/app/config.hpp"

namespace softsense::app {

struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  bool quiet = false;
};

/// Loads --config (or defaults) and applies the --seed and --out overrides.
/// --seed replaces the training seed and the experiment seed list.
RunConfig resolve_config(const GlobalOptions& options);

/// Where progress and tables go; null when --quiet.
struct Console {
  std::ostream* out = nullptr;
  void line(const std::string& text) const;
  void block(const std::string& text) const;
};

/// Writes checkpoint.json, history.csv, metrics.csv, metrics.txt and config.ini.
void cmd_train(const RunConfig& config, const Console& console);

struct EvaluateOptions {
  std::filesystem::path checkpoint;
  /// Evaluate every row of this CSV instead of the configured test split.
  std::optional<std::filesystem::path> data;
  /// Use the run configuration echoed into the checkpoint (no --config given).
  bool config_from_checkpoint = true;
};

/// Writes metrics.csv and metrics.txt.
void cmd_evaluate(const RunConfig& config, const EvaluateOptions& options, const Console& console);
/// Writes predictions.csv with a probability and a hard label per head.
void cmd_predict(const RunConfig& config, const EvaluateOptions& options, const Console& console);

/// Writes runs.csv, failures.csv, cells.csv, the three comparison tables and
/// report.txt. Failed runs are recorded and skipped; if every run fails the
/// first failure is rethrown after the reports are written.
void cmd_experiment(const RunConfig& config, const Console& console);

/// Writes headmode_history.csv and headmode.txt.
void cmd_headmode_compare(const RunConfig& config, const Console& console);

struct ParamsOptions {
  std::optional<std::size_t> input_dim;
  std::optional<std::size_t> head_units;
  std::optional<std::vector<std::size_t>> hidden_dims;
};

/// Table of per-layer parameter counts; printed even with --quiet.
std::string params_table(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                         std::size_t head_units);
void cmd_params(const RunConfig& config, const ParamsOptions& options, std::ostream& out);

/// Writes synthetic.csv and config.ini.
void cmd_generate(const RunConfig& config, const Console& console);

}  // namespace softsense::app
