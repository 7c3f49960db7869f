#include "softsense/app/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "softsense/app/experiment.hpp"
#include "softsense/app/report.hpp"
#include "softsense/checkpoint.hpp"
#include "softsense/errors.hpp"
#include "softsense/params.hpp"

namespace softsense::app {

namespace {

namespace fs = std::filesystem;

std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * ratio);
  return buf;
}

struct EvaluationInput {
  Dataset data;
  Checkpoint ckpt;
  RunConfig config;
};

/// Rows of `path` aligned to the checkpoint's heads. Heads whose column is
/// absent come back fully missing.
Dataset load_for_checkpoint(const fs::path& path, const Checkpoint& ckpt) {
  const std::vector<std::string> header = csv_header(path);
  std::vector<std::string> present;
  for (const auto& head : ckpt.head_names) {
    if (std::find(header.begin(), header.end(), head) != header.end()) present.push_back(head);
  }
  Dataset loaded = load_csv(path, {{}, present});
  Dataset out{loaded.features, HeadLabels(loaded.size(), ckpt.head_names.size()),
              loaded.feature_names, ckpt.head_names};
  for (std::size_t j = 0; j < ckpt.head_names.size(); ++j) {
    const auto it = std::find(present.begin(), present.end(), ckpt.head_names[j]);
    if (it == present.end()) continue;
    const std::size_t src = static_cast<std::size_t>(it - present.begin());
    for (std::size_t i = 0; i < out.size(); ++i) out.labels(i, j) = loaded.labels(i, src);
  }
  return out;
}

void require_width(const Dataset& data, const Checkpoint& ckpt) {
  const std::size_t expected = ckpt.model.input_dim();
  if (data.features.cols() != expected) {
    throw ShapeError("checkpoint expects " + std::to_string(expected) +
                     " feature columns, data has " + std::to_string(data.features.cols()));
  }
  if (data.feature_names != ckpt.feature_names) {
    throw DataError("feature columns do not match the checkpoint's feature names");
  }
}

EvaluationInput evaluation_input(const RunConfig& config, const EvaluateOptions& options) {
  EvaluationInput in;
  in.ckpt = load_checkpoint(options.checkpoint);
  in.config = options.config_from_checkpoint ? parse_config(in.ckpt.config_echo) : config;
  in.config.output_dir = config.output_dir;
  if (options.data) {
    in.data = load_for_checkpoint(*options.data, in.ckpt);
  } else {
    const Dataset full = load_dataset(in.config.data);
    in.data = split_data(full, in.config.data, in.config.train.seed).test;
  }
  require_width(in.data, in.ckpt);
  if (in.data.size() > 0) {
    in.data.features = standardize_apply(in.ckpt.model.standardization, in.data.features);
  }
  return in;
}

}  // namespace

RunConfig resolve_config(const GlobalOptions& options) {
  RunConfig config = options.config ? load_config(*options.config) : RunConfig{};
  if (options.seed) {
    config.train.seed = *options.seed;
    config.experiment.seeds = {*options.seed};
  }
  if (options.out) config.output_dir = *options.out;
  config.validate();
  return config;
}

void Console::line(const std::string& text) const {
  if (out) *out << text << '\n' << std::flush;
}

void Console::block(const std::string& text) const {
  if (out) *out << text << std::flush;
}

void cmd_train(const RunConfig& config, const Console& console) {
  config.validate();
  const fs::path dir = config.output_dir;
  const PreparedData data = prepare_data(config.data, config.train.seed);
  console.line("training " + config.model.kind.abbreviation() + " on " +
               std::to_string(data.train.size()) + " rows x " +
               std::to_string(data.train.features.cols()) + " features, " +
               std::to_string(data.train.labels.n_heads()) + " heads");

  const SingleRun run =
      run_single(data, config.model.kind, config.model.hidden_dims, config.train, config.metrics);

  Checkpoint ckpt;
  ckpt.kind = config.model.kind;
  ckpt.model = run.trained.model;
  ckpt.feature_names = data.train.feature_names;
  ckpt.head_names = data.train.head_names;
  for (std::size_t j = 0; j < data.train.labels.n_heads(); ++j) {
    ckpt.train_class_sizes.push_back(data.train.labels.class_counts(j));
  }
  ckpt.seed = config.train.seed;
  ckpt.config_echo = echo_config(config);

  fs::create_directories(dir);
  save_checkpoint(dir / "checkpoint.json", ckpt);
  write_text(dir / "history.csv", history_csv(run.trained));
  write_text(dir / "metrics.csv", metrics_csv(run.metrics));
  write_text(dir / "metrics.txt", metrics_text(run.metrics));
  write_text(dir / "config.ini", ckpt.config_echo);
  console.block(metrics_text(run.metrics));
  console.line("wrote " + dir.string());
}

void cmd_evaluate(const RunConfig& config, const EvaluateOptions& options, const Console& console) {
  const EvaluationInput in = evaluation_input(config, options);
  const Prediction pred = predict(in.ckpt.model, in.data.features);
  BetaPolicy policy;
  if (in.config.metrics.beta_policy == BetaPolicy::Kind::fixed) {
    policy = BetaPolicy::fixed(in.config.metrics.fixed_beta);
  } else {
    policy.train_class_sizes = in.ckpt.train_class_sizes;
  }
  const MetricsReport report = evaluate(pred.hard, in.data.labels, policy, in.ckpt.head_names);
  const fs::path dir = config.output_dir;
  write_text(dir / "metrics.csv", metrics_csv(report));
  write_text(dir / "metrics.txt", metrics_text(report));
  console.block(metrics_text(report));
}

void cmd_predict(const RunConfig& config, const EvaluateOptions& options, const Console& console) {
  const EvaluationInput in = evaluation_input(config, options);
  const Prediction pred = predict(in.ckpt.model, in.data.features);
  std::string csv = "row";
  for (const auto& head : in.ckpt.head_names) csv += "," + head + "_prob," + head + "_pred";
  csv += "\n";
  for (std::size_t i = 0; i < in.data.size(); ++i) {
    csv += std::to_string(i);
    for (std::size_t j = 0; j < in.ckpt.head_names.size(); ++j) {
      csv += "," + format_double(pred.positive_prob(i, j)) + "," +
             (pred.hard(i, j) == Label::positive ? "1" : "0");
    }
    csv += "\n";
  }
  write_text(fs::path(config.output_dir) / "predictions.csv", csv);
  console.line("wrote predictions for " + std::to_string(in.data.size()) + " rows");
}

void cmd_experiment(const RunConfig& config, const Console& console) {
  const GridResult grid = run_grid(config, [&](const std::string& msg) { console.line(msg); });
  const fs::path dir = config.output_dir;
  const std::string t4 = imbalance_table(grid);
  const std::string t5 = depth_table(grid);
  const std::string f7 =
      ranking_table(grid, config.model.hidden_dims, config.train.mlp_hidden);
  write_text(dir / "runs.csv", runs_csv(grid));
  write_text(dir / "failures.csv", failures_csv(grid));
  write_text(dir / "cells.csv", cells_csv(grid));
  write_text(dir / "imbalance_table.txt", t4);
  write_text(dir / "depth_table.txt", t5);
  write_text(dir / "ranking.txt", f7);
  const std::string report = t4 + "\n" + t5 + "\n" + f7 + "\n" +
                             std::to_string(grid.runs.size() - grid.failures()) + " of " +
                             std::to_string(grid.runs.size()) + " runs succeeded\n";
  write_text(dir / "report.txt", report);
  write_text(dir / "config.ini", echo_config(config));
  console.block("\n" + report);
  if (grid.failures() == grid.runs.size()) {
    const RunRecord& first = grid.runs.front();
    throw Error(first.error_kind, "all " + std::to_string(grid.runs.size()) +
                                      " runs failed; first: " + *first.error);
  }
}

void cmd_headmode_compare(const RunConfig& config, const Console& console) {
  config.validate();
  const PreparedData data = prepare_data(config.data, config.train.seed);
  const HeadmodeResult result = headmode_compare(data.train, config.train,
                                                 config.model.hidden_dims.front(),
                                                 config.headmode);
  const fs::path dir = config.output_dir;
  write_text(dir / "headmode_history.csv", headmode_csv(result));
  write_text(dir / "headmode.txt", headmode_text(result));
  write_text(dir / "config.ini", echo_config(config));
  console.block(headmode_text(result));
}

std::string params_table(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                         std::size_t head_units) {
  const ParamCounts counts = count_parameters(input_dim, hidden_dims, head_units);
  auto product = [](std::size_t a, std::size_t b) {
    return std::to_string(a) + " * " + std::to_string(b) + " = " + std::to_string(a * b);
  };
  TextTable table({"Layers", "Encoder", "Decoder x", "Decoder y"});
  for (std::size_t k = 0; k < counts.layers.size(); ++k) {
    const LayerParamCounts& l = counts.layers[k];
    table.add_row({"Autoencoder_" + std::to_string(k + 1), product(l.in_dim + 1, l.hidden_dim),
                   product(l.hidden_dim + 1, l.in_dim), product(l.hidden_dim + 1, head_units)});
  }
  table.add_row({"Classifier", "", "", product(hidden_dims.back() + 1, head_units)});
  std::string out = table.render();
  out += "Total " + std::to_string(counts.total) + "\n";
  out += "Plain stacked autoencoder (encoders + decoder x) " +
         std::to_string(counts.plain_autoencoder) + "\n";
  out += "Head overhead (decoder y + classifier) " + std::to_string(counts.head_overhead) + " = " +
         percent(counts.overhead_ratio) + " of the plain autoencoder\n";
  return out;
}

void cmd_params(const RunConfig& config, const ParamsOptions& options, std::ostream& out) {
  std::size_t input_dim = 0;
  std::size_t heads = 0;
  if (!options.input_dim || !options.head_units) {
    if (config.data.source == DataSource::synthetic) {
      input_dim = config.data.synthetic.n_features;
      heads = config.data.synthetic.n_heads();
    } else {
      const auto header = csv_header(config.data.train_csv);
      heads = config.data.schema.label_columns.size();
      input_dim = config.data.schema.feature_columns.empty() ? header.size() - heads
                                                             : config.data.schema.feature_columns.size();
    }
  }
  out << params_table(options.input_dim.value_or(input_dim),
                      options.hidden_dims.value_or(config.model.hidden_dims),
                      options.head_units.value_or(2 * heads));
}

void cmd_generate(const RunConfig& config, const Console& console) {
  config.data.synthetic.validate();
  Rng rng(config.data.synthetic.seed);
  const Dataset ds = generate_synthetic(config.data.synthetic, rng);
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  save_csv(dir / "synthetic.csv", ds);
  write_text(dir / "config.ini", echo_config(config));
  console.line("wrote " + std::to_string(ds.size()) + " rows to " +
               (dir / "synthetic.csv").string());
}

}  // namespace softsense::app
