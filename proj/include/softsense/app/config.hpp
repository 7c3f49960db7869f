#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "softsense/dataset.hpp"
#include "softsense/metrics.hpp"
#include "softsense/model.hpp"
#include "softsense/synthetic.hpp"
#include "softsense/training.hpp"

namespace softsense::app {

enum class DataSource { synthetic, csv };

struct DataConfig {
  DataSource source = DataSource::synthetic;
  SyntheticSpec synthetic;
  std::filesystem::path train_csv;
  /// When set, the test split comes from this file instead of being carved
  /// out of train_csv.
  std::optional<std::filesystem::path> test_csv;
  CsvSchema schema;
  SplitFractions fractions;
  std::optional<std::size_t> stratify_head;
};

struct ModelConfig {
  ModelKind kind;  // SQAE+LR
  std::vector<std::size_t> hidden_dims{32, 16};
};

struct MetricsConfig {
  BetaPolicy::Kind beta_policy = BetaPolicy::Kind::per_head_imbalance_ratio;
  double fixed_beta = 1.0;
};

struct ExperimentConfig {
  std::vector<ModelKind> models;
  std::vector<ImbalanceMethod> imbalance{ImbalanceMethod::smote, ImbalanceMethod::weighted_class};
  std::vector<LossCombiner> combiners{LossCombiner::naive, LossCombiner::variance_weighted};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t jobs = 1;

  ExperimentConfig();
};

struct HeadmodeConfig {
  std::size_t epochs = 100;
  std::size_t reference_epoch = 50;
};

struct RunConfig {
  DataConfig data;
  ModelConfig model;
  TrainConfig train;
  MetricsConfig metrics;
  ExperimentConfig experiment;
  HeadmodeConfig headmode;
  std::filesystem::path output_dir = "runs/latest";

  /// Cross-field checks; throws ConfigError.
  void validate() const;
};

/// INI text with sections [data] [synthetic] [model] [train] [metrics]
/// [experiment] [headmode] [output]. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical INI form listing every setting. parse_config(echo_config(c))
/// reproduces c. The output directory is omitted.
std::string echo_config(const RunConfig& config);

BetaPolicy beta_policy(const MetricsConfig& metrics, const HeadLabels& train_labels);

}  // namespace softsense::app
