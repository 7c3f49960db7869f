#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "softsense/app/config.hpp"
#include "softsense/dataset.hpp"
#include "softsense/errors.hpp"
#include "softsense/metrics.hpp"
#include "softsense/training.hpp"

namespace softsense::app {

/// Splits of one dataset with features standardized by the training split.
struct PreparedData {
  Dataset train;
  Dataset val;
  Dataset test;
  StandardizationStats stats;
};

/// The full configured dataset: generated, or read from train_csv.
Dataset load_dataset(const DataConfig& data);
/// Raw (unstandardized) train/val/test parts of `full`, or of test_csv for the test part.
DatasetSplit split_data(const Dataset& full, const DataConfig& data, std::uint64_t split_seed);
PreparedData prepare_data(const DataConfig& data, std::uint64_t split_seed);
PreparedData prepare_data(const Dataset& full, const DataConfig& data, std::uint64_t split_seed);

struct SingleRun {
  StackTrainResult trained;
  MetricsReport metrics;
};

/// Trains `kind` on data.train (seeded by cfg.seed) and evaluates on data.test.
SingleRun run_single(const PreparedData& data, const ModelKind& kind,
                     const std::vector<std::size_t>& hidden_dims, const TrainConfig& cfg,
                     const MetricsConfig& metrics);

struct GridCell {
  ModelKind model;
  ImbalanceMethod imbalance = ImbalanceMethod::weighted_class;
  /// Unset for models without quality-driven pretraining.
  std::optional<LossCombiner> combiner;

  /// Model abbreviation plus WC/SMOTE/NONE and WL/VWL tags, e.g. "SQAE+LR WC VWL".
  std::string label() const;
};

std::vector<GridCell> expand_grid(const ExperimentConfig& experiment);

struct RunRecord {
  std::size_t cell = 0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
  std::optional<std::string> error;  // "kind: message" when the run failed
  ErrorKind error_kind = ErrorKind::internal;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> head_names;
  std::vector<RunRecord> runs;  // cell-major, then seed

  std::size_t failures() const;
};

using Progress = std::function<void(const std::string&)>;

/// Every cell × seed. Seed s drives both the data split and training. With
/// jobs > 1 runs execute concurrently; results do not depend on jobs.
GridResult run_grid(const RunConfig& config, const Progress& progress = {});

/// Per-cell, per-head medians over the seeds that produced a defined value.
struct CellSummary {
  std::vector<std::optional<double>> recall;
  std::vector<std::optional<double>> f_beta;
  std::optional<double> macro_recall;
  std::optional<double> macro_f_beta;
};
std::vector<CellSummary> summarize_cells(const GridResult& grid);

std::optional<double> median(std::vector<double> values);

/// Median recall of one head over every successful run with the given method.
std::optional<double> median_recall(const GridResult& grid, ImbalanceMethod method,
                                    std::size_t head);

std::string runs_csv(const GridResult& grid);
std::string failures_csv(const GridResult& grid);
std::string cells_csv(const GridResult& grid);
/// Recall and F_beta per output and imbalance method.
std::string imbalance_table(const GridResult& grid);
/// Recall and F_beta per output for single-layer versus stacked QAE.
std::string depth_table(const GridResult& grid);
/// Cells ranked by macro-average recall, with the abbreviation legend.
std::string ranking_table(const GridResult& grid, const std::vector<std::size_t>& hidden_dims,
                          const std::vector<std::size_t>& mlp_hidden);

struct HeadmodeVariant {
  std::string name;
  std::size_t rows = 0;
  LossHistory history;
  std::optional<std::size_t> epoch_reaching;
  std::optional<std::size_t> updates_reaching;
};

struct HeadmodeResult {
  double reference_loss = 0.0;
  HeadmodeVariant categorical;  // one head, head identity one-hot in the features
  HeadmodeVariant multihead;
};

/// Trains one QAE layer of width `hidden` both ways on standardized training
/// data. Early stopping is off; the categorical variant gets at least as many
/// gradient updates as the multi-head one. The reference is the multi-head
/// loss at settings.reference_epoch.
HeadmodeResult headmode_compare(const Dataset& train, const TrainConfig& cfg, std::size_t hidden,
                                const HeadmodeConfig& settings);
std::string headmode_csv(const HeadmodeResult& result);
std::string headmode_text(const HeadmodeResult& result);

}  // namespace softsense::app
