#include "softsense/app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "softsense/app/report.hpp"
#include "softsense/errors.hpp"
#include "softsense/synthetic.hpp"

namespace softsense::app {

namespace {

std::string imbalance_tag(ImbalanceMethod m) {
  switch (m) {
    case ImbalanceMethod::weighted_class: return "WC";
    case ImbalanceMethod::smote: return "SMOTE";
    case ImbalanceMethod::none: return "NONE";
  }
  return "?";
}

std::string imbalance_title(ImbalanceMethod m) {
  switch (m) {
    case ImbalanceMethod::weighted_class: return "WEIGHTED CLASS";
    case ImbalanceMethod::smote: return "SMOTE";
    case ImbalanceMethod::none: return "NONE";
  }
  return "?";
}

std::string combiner_tag(LossCombiner c) {
  switch (c) {
    case LossCombiner::naive: return "WL";
    case LossCombiner::variance_weighted: return "VWL";
    case LossCombiner::reconstruction_only: return "RL";
  }
  return "?";
}

std::string dims_text(const std::vector<std::size_t>& dims) {
  std::string out = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    out += (i ? "," : "") + std::to_string(dims[i]);
  }
  return out + "]";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

Dataset standardized(Dataset ds, const StandardizationStats& stats) {
  if (ds.size() > 0) ds.features = standardize_apply(stats, ds.features);
  return ds;
}

std::optional<double> mean_defined(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

/// Median of one per-head metric over a set of successful runs.
template <class Pick>
std::optional<double> median_over(const GridResult& grid, std::size_t head, Pick&& include,
                                  std::optional<double> HeadMetrics::*field) {
  std::vector<double> values;
  for (const RunRecord& run : grid.runs) {
    if (run.error || !include(grid.cells[run.cell])) continue;
    if (head < run.metrics.heads.size() && run.metrics.heads[head].*field) {
      values.push_back(*(run.metrics.heads[head].*field));
    }
  }
  return median(std::move(values));
}

}  // namespace

Dataset load_dataset(const DataConfig& data) {
  if (data.source == DataSource::synthetic) {
    Rng rng(data.synthetic.seed);
    return generate_synthetic(data.synthetic, rng);
  }
  return load_csv(data.train_csv, data.schema);
}

PreparedData prepare_data(const DataConfig& data, std::uint64_t split_seed) {
  return prepare_data(load_dataset(data), data, split_seed);
}

DatasetSplit split_data(const Dataset& full, const DataConfig& data, std::uint64_t split_seed) {
  full.validate();
  if (!data.test_csv) return split(full, data.fractions, split_seed, data.stratify_head);
  SplitFractions f = data.fractions;
  const double kept = f.train + f.val;
  if (!(kept > 0.0)) throw ConfigError("train and val fractions are both zero");
  f = {f.train / kept, f.val / kept, 0.0};
  DatasetSplit parts = split(full, f, split_seed, data.stratify_head);
  CsvSchema schema = data.schema;
  if (schema.feature_columns.empty()) schema.feature_columns = full.feature_names;
  parts.test = load_csv(*data.test_csv, schema);
  return parts;
}

PreparedData prepare_data(const Dataset& full, const DataConfig& data, std::uint64_t split_seed) {
  DatasetSplit parts = split_data(full, data, split_seed);
  if (parts.train.size() == 0) throw InsufficientDataError("training split is empty");
  PreparedData out;
  out.stats = standardize_fit(parts.train.features);
  out.train = standardized(std::move(parts.train), out.stats);
  out.val = standardized(std::move(parts.val), out.stats);
  out.test = standardized(std::move(parts.test), out.stats);
  return out;
}

SingleRun run_single(const PreparedData& data, const ModelKind& kind,
                     const std::vector<std::size_t>& hidden_dims, const TrainConfig& cfg,
                     const MetricsConfig& metrics) {
  Rng rng(cfg.seed);
  const Validation validation =
      cfg.monitor_validation && data.val.size() > 0
          ? Validation{&data.val.features, &data.val.labels}
          : Validation{};
  if (cfg.monitor_validation && data.val.size() == 0) {
    throw ConfigError("monitor_validation needs a nonempty validation split");
  }
  SingleRun out;
  out.trained = train_model(kind, data.train.features, data.train.labels, hidden_dims, cfg, rng,
                            validation);
  out.trained.model.standardization = data.stats;
  const Prediction pred = predict(out.trained.model, data.test.features);
  out.metrics = evaluate(pred.hard, data.test.labels, beta_policy(metrics, data.train.labels),
                         data.train.head_names);
  return out;
}

std::string GridCell::label() const {
  std::string out = model.abbreviation() + " " + imbalance_tag(imbalance);
  if (combiner) out += " " + combiner_tag(*combiner);
  return out;
}

std::vector<GridCell> expand_grid(const ExperimentConfig& experiment) {
  std::vector<GridCell> cells;
  for (const ModelKind& model : experiment.models) {
    for (const ImbalanceMethod imbalance : experiment.imbalance) {
      if (model.pretraining != Pretraining::quality) {
        cells.push_back({model, imbalance, std::nullopt});
        continue;
      }
      for (const LossCombiner combiner : experiment.combiners) {
        cells.push_back({model, imbalance, combiner});
      }
    }
  }
  return cells;
}

std::size_t GridResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const RunRecord& r) { return r.error; }));
}

GridResult run_grid(const RunConfig& config, const Progress& progress) {
  config.validate();
  GridResult grid;
  grid.cells = expand_grid(config.experiment);
  grid.seeds = config.experiment.seeds;

  const Dataset full = load_dataset(config.data);
  grid.head_names = full.head_names;
  std::vector<PreparedData> prepared;
  for (const std::uint64_t seed : grid.seeds) {
    prepared.push_back(prepare_data(full, config.data, seed));
  }

  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    for (const std::uint64_t seed : grid.seeds) grid.runs.push_back({c, seed, {}, std::nullopt});
  }

  std::mutex progress_mutex;
  auto execute = [&](std::size_t index) {
    RunRecord& run = grid.runs[index];
    const GridCell& cell = grid.cells[run.cell];
    TrainConfig cfg = config.train;
    cfg.seed = run.seed;
    cfg.imbalance = cell.imbalance;
    if (cell.combiner) cfg.combiner = *cell.combiner;
    const PreparedData& data = prepared[index % grid.seeds.size()];
    try {
      run.metrics = run_single(data, cell.model, config.model.hidden_dims, cfg, config.metrics)
                        .metrics;
    } catch (const Error& e) {
      run.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
      run.error_kind = e.kind();
    } catch (const std::exception& e) {
      run.error = std::string("internal_error: ") + e.what();
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(cell.label() + " seed " + std::to_string(run.seed) +
               (run.error ? " failed: " + *run.error : " done"));
    }
  };

  const std::size_t jobs = std::min(config.experiment.jobs, grid.runs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < grid.runs.size(); ++i) execute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < grid.runs.size(); i = next++) execute(i);
      });
    }
  }
  return grid;
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::optional<double> median_recall(const GridResult& grid, ImbalanceMethod method,
                                    std::size_t head) {
  return median_over(
      grid, head, [&](const GridCell& c) { return c.imbalance == method; }, &HeadMetrics::recall);
}

std::vector<CellSummary> summarize_cells(const GridResult& grid) {
  std::vector<CellSummary> out;
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    const GridCell* target = &grid.cells[c];
    auto same = [target](const GridCell& cell) { return &cell == target; };
    CellSummary s;
    for (std::size_t h = 0; h < grid.head_names.size(); ++h) {
      s.recall.push_back(median_over(grid, h, same, &HeadMetrics::recall));
      s.f_beta.push_back(median_over(grid, h, same, &HeadMetrics::f_beta));
    }
    s.macro_recall = mean_defined(s.recall);
    s.macro_f_beta = mean_defined(s.f_beta);
    out.push_back(std::move(s));
  }
  return out;
}

std::string runs_csv(const GridResult& grid) {
  std::string out =
      "cell,model,imbalance,combiner,seed,head,support,tp,fp,tn,fn,recall,precision,f_beta,beta\n";
  for (const RunRecord& run : grid.runs) {
    if (run.error) continue;
    const GridCell& cell = grid.cells[run.cell];
    const std::string prefix =
        csv_field(cell.label()) + "," + cell.model.abbreviation() + "," +
        std::string(imbalance_name(cell.imbalance)) + "," +
        (cell.combiner ? std::string(combiner_name(*cell.combiner)) : std::string()) + "," +
        std::to_string(run.seed) + ",";
    for (const HeadMetrics& h : run.metrics.heads) {
      out += prefix + csv_field(h.name) + "," + std::to_string(h.counts.support()) + "," +
             std::to_string(h.counts.tp) + "," + std::to_string(h.counts.fp) + "," +
             std::to_string(h.counts.tn) + "," + std::to_string(h.counts.fn) + "," +
             full_precision(h.recall) + "," + full_precision(h.precision) + "," +
             full_precision(h.f_beta) + "," + full_precision(h.beta) + "\n";
    }
  }
  return out;
}

std::string failures_csv(const GridResult& grid) {
  std::string out = "cell,seed,error\n";
  for (const RunRecord& run : grid.runs) {
    if (!run.error) continue;
    out += csv_field(grid.cells[run.cell].label()) + "," + std::to_string(run.seed) + "," +
           csv_field(*run.error) + "\n";
  }
  return out;
}

std::string cells_csv(const GridResult& grid) {
  const auto summaries = summarize_cells(grid);
  std::string out = "cell,head,median_recall,median_f_beta\n";
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    for (std::size_t h = 0; h < grid.head_names.size(); ++h) {
      out += csv_field(grid.cells[c].label()) + "," + csv_field(grid.head_names[h]) + "," +
             full_precision(summaries[c].recall[h]) + "," +
             full_precision(summaries[c].f_beta[h]) + "\n";
    }
    out += csv_field(grid.cells[c].label()) + ",macro," +
           full_precision(summaries[c].macro_recall) + "," +
           full_precision(summaries[c].macro_f_beta) + "\n";
  }
  return out;
}

std::string imbalance_table(const GridResult& grid) {
  std::vector<ImbalanceMethod> methods;
  for (const GridCell& c : grid.cells) {
    if (std::find(methods.begin(), methods.end(), c.imbalance) == methods.end()) {
      methods.push_back(c.imbalance);
    }
  }
  TextTable table({"Output", "IMB Method", "Recall", "F_beta imb"});
  for (std::size_t h = 0; h < grid.head_names.size(); ++h) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      auto pick = [&](const GridCell& c) { return c.imbalance == methods[m]; };
      table.add_row({m == 0 ? grid.head_names[h] : "", imbalance_title(methods[m]),
                     fixed4(median_over(grid, h, pick, &HeadMetrics::recall)),
                     fixed4(median_over(grid, h, pick, &HeadMetrics::f_beta))});
    }
  }
  return "Imbalance performance compared across outputs (median over models and seeds)\n\n" +
         table.render();
}

std::string depth_table(const GridResult& grid) {
  const bool any_quality = std::any_of(grid.cells.begin(), grid.cells.end(), [](const auto& c) {
    return c.model.pretraining == Pretraining::quality;
  });
  std::string out =
      "Autoencoder vs. stacked autoencoder compared across outputs (median over cells and "
      "seeds)\n\n";
  if (!any_quality) return out + "no QAE or SQAE cells in this grid\n";
  TextTable table({"Output", "AE", "Recall", "F_beta imb"});
  for (std::size_t h = 0; h < grid.head_names.size(); ++h) {
    bool first = true;
    for (const bool stacked : {false, true}) {
      auto pick = [&](const GridCell& c) {
        return c.model.pretraining == Pretraining::quality && c.model.stacked == stacked;
      };
      table.add_row({first ? grid.head_names[h] : "", stacked ? "SQAE" : "QAE",
                     fixed4(median_over(grid, h, pick, &HeadMetrics::recall)),
                     fixed4(median_over(grid, h, pick, &HeadMetrics::f_beta))});
      first = false;
    }
  }
  return out + table.render();
}

std::string ranking_table(const GridResult& grid, const std::vector<std::size_t>& hidden_dims,
                          const std::vector<std::size_t>& mlp_hidden) {
  const auto summaries = summarize_cells(grid);
  std::vector<std::size_t> order(grid.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = summaries[a].macro_recall.value_or(-1.0);
    const double rb = summaries[b].macro_recall.value_or(-1.0);
    return ra > rb;
  });
  TextTable table({"Model", "Recall", "F_beta imb"});
  for (const std::size_t c : order) {
    table.add_row({grid.cells[c].label(), fixed4(summaries[c].macro_recall),
                   fixed4(summaries[c].macro_f_beta)});
  }
  return "Average output performance per model variant (mean over outputs of per-cell "
         "medians)\n\n" +
         table.render() +
         "\nThe abbreviations are: AE: autoencoder, Q: quality-driven, S: stacked (with hidden "
         "layers " +
         dims_text(hidden_dims) +
         "), WC: weighted class, WL: weighted loss, VWL: variance weighted loss, LR: linear "
         "regression classifier, NN: fully connected neural net classifier (with hidden layers " +
         dims_text(mlp_hidden) + ")\nSMOTE: synthetic minority oversampling, NONE: no imbalance "
         "handling. LR is fit as a logistic model.\n";
}

HeadmodeResult headmode_compare(const Dataset& train, const TrainConfig& cfg, std::size_t hidden,
                                const HeadmodeConfig& settings) {
  if (settings.reference_epoch == 0 || settings.reference_epoch > settings.epochs) {
    throw ConfigError("reference_epoch must lie in [1, epochs]");
  }
  TrainConfig run_cfg = cfg;
  run_cfg.patience = std::numeric_limits<std::size_t>::max();
  run_cfg.max_epochs = settings.epochs;

  Rng rng(cfg.seed);
  Rng multi_rng = rng.split();
  Rng flat_rng = rng.split();

  HeadmodeResult result;
  const std::size_t heads = train.labels.n_heads();
  {
    const PreparedTraining prep = prepare_training(train.features, train.labels, run_cfg,
                                                   multi_rng);
    result.multihead.name = "multihead";
    result.multihead.rows = prep.features.rows();
    result.multihead.history =
        train_qae_layer(prep.features, prep.labels, prep.weights,
                        {train.features.cols(), hidden, 2 * heads}, run_cfg, multi_rng)
            .history;
  }
  if (result.multihead.history.size() < settings.reference_epoch) {
    throw InternalError("multi-head run ended before the reference epoch");
  }
  const std::size_t budget = result.multihead.history.back().updates;
  result.reference_loss = result.multihead.history[settings.reference_epoch - 1].loss;

  {
    const Dataset flat = flatten_heads(train);
    const PreparedTraining prep = prepare_training(flat.features, flat.labels, run_cfg, flat_rng);
    const std::size_t batch = std::min(run_cfg.batch_size, prep.features.rows());
    const std::size_t per_epoch = (prep.features.rows() + batch - 1) / batch;
    TrainConfig flat_cfg = run_cfg;
    flat_cfg.max_epochs = (budget + per_epoch - 1) / per_epoch;
    result.categorical.name = "categorical";
    result.categorical.rows = prep.features.rows();
    result.categorical.history =
        train_qae_layer(prep.features, prep.labels, prep.weights,
                        {flat.features.cols(), hidden, 2}, flat_cfg, flat_rng)
            .history;
  }

  for (HeadmodeVariant* v : {&result.multihead, &result.categorical}) {
    for (const EpochRecord& r : v->history) {
      if (r.loss <= result.reference_loss) {
        v->epoch_reaching = r.epoch;
        v->updates_reaching = r.updates;
        break;
      }
    }
  }
  return result;
}

std::string headmode_csv(const HeadmodeResult& result) {
  std::string out = "variant,epoch,updates,J,J_x,J_y,sigma1_sq,sigma2_sq\n";
  for (const HeadmodeVariant* v : {&result.categorical, &result.multihead}) {
    for (const EpochRecord& r : v->history) {
      out += v->name + "," + std::to_string(r.epoch) + "," + std::to_string(r.updates) + "," +
             format_double(r.loss) + "," + format_double(r.recon) + "," + format_double(r.pred) +
             "," + format_double(r.sigma1_sq) + "," + format_double(r.sigma2_sq) + "\n";
    }
  }
  return out;
}

std::string headmode_text(const HeadmodeResult& result) {
  auto count = [](const std::optional<std::size_t>& v) {
    return v ? std::to_string(*v) : std::string("not reached");
  };
  TextTable table({"Variant", "Rows", "Epochs", "Updates", "Final J", "Epoch reaching ref",
                   "Updates reaching ref"});
  for (const HeadmodeVariant* v : {&result.categorical, &result.multihead}) {
    const bool empty = v->history.empty();
    table.add_row({v->name, std::to_string(v->rows), std::to_string(v->history.size()),
                   empty ? "0" : std::to_string(v->history.back().updates),
                   empty ? kUndefined : fixed4(v->history.back().loss),
                   count(v->epoch_reaching), count(v->updates_reaching)});
  }
  return "Multi-headed vs. categorical-input single head\nreference loss " +
         fixed4(result.reference_loss) + "\n\n" + table.render();
}

}  // namespace softsense::app
