#include "softsense/app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "softsense/errors.hpp"

namespace softsense::app {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(items[i]);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::size_t parse_count(const std::string& v) { return static_cast<std::size_t>(parse_uint(v)); }

double parse_real(const std::string& v) {
  const auto d = parse_double(v);
  if (!d) throw ConfigError("expected a number, got '" + v + "'");
  return *d;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<std::size_t> parse_counts(const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(v)) out.push_back(parse_count(item));
  return out;
}

std::vector<double> parse_reals(const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_real(item));
  return out;
}

std::string count_text(const std::size_t& v) { return std::to_string(v); }
std::string real_text(const double& v) { return format_double(v); }
std::string bool_text(bool v) { return v ? "true" : "false"; }

std::string beta_policy_name(BetaPolicy::Kind k) {
  return k == BetaPolicy::Kind::fixed ? "fixed" : "imbalance_ratio";
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"data", "source",
       [](RunConfig& c, const std::string& v) {
         if (v == "synthetic") c.data.source = DataSource::synthetic;
         else if (v == "csv") c.data.source = DataSource::csv;
         else throw ConfigError("expected synthetic or csv, got '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.data.source == DataSource::csv ? "csv" : "synthetic");
       }},
      {"data", "train_csv", [](RunConfig& c, const std::string& v) { c.data.train_csv = v; },
       [](const RunConfig& c) { return c.data.train_csv.string(); }},
      {"data", "test_csv",
       [](RunConfig& c, const std::string& v) {
         c.data.test_csv = v.empty() ? std::nullopt : std::optional<std::filesystem::path>(v);
       },
       [](const RunConfig& c) { return c.data.test_csv ? c.data.test_csv->string() : ""; }},
      {"data", "feature_columns",
       [](RunConfig& c, const std::string& v) { c.data.schema.feature_columns = split_list(v); },
       [](const RunConfig& c) {
         return join<std::string>(c.data.schema.feature_columns, [](auto& s) { return s; });
       }},
      {"data", "label_columns",
       [](RunConfig& c, const std::string& v) { c.data.schema.label_columns = split_list(v); },
       [](const RunConfig& c) {
         return join<std::string>(c.data.schema.label_columns, [](auto& s) { return s; });
       }},
      {"data", "train_fraction",
       [](RunConfig& c, const std::string& v) { c.data.fractions.train = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.data.fractions.train); }},
      {"data", "val_fraction",
       [](RunConfig& c, const std::string& v) { c.data.fractions.val = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.data.fractions.val); }},
      {"data", "test_fraction",
       [](RunConfig& c, const std::string& v) { c.data.fractions.test = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.data.fractions.test); }},
      {"data", "stratify_head",
       [](RunConfig& c, const std::string& v) {
         c.data.stratify_head =
             v.empty() || v == "none" ? std::nullopt : std::optional<std::size_t>(parse_count(v));
       },
       [](const RunConfig& c) {
         return c.data.stratify_head ? std::to_string(*c.data.stratify_head) : "none";
       }},

      {"synthetic", "n_samples",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.n_samples = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.data.synthetic.n_samples); }},
      {"synthetic", "n_features",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.n_features = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.data.synthetic.n_features); }},
      {"synthetic", "latent_rank",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.latent_rank = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.data.synthetic.latent_rank); }},
      {"synthetic", "imbalance_ratios",
       [](RunConfig& c, const std::string& v) {
         c.data.synthetic.imbalance_ratios = parse_reals(v);
       },
       [](const RunConfig& c) {
         return join<double>(c.data.synthetic.imbalance_ratios, real_text);
       }},
      {"synthetic", "observation_rates",
       [](RunConfig& c, const std::string& v) {
         c.data.synthetic.observation_rates = parse_reals(v);
       },
       [](const RunConfig& c) {
         return join<double>(c.data.synthetic.observation_rates, real_text);
       }},
      {"synthetic", "label_noise",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.label_noise = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.data.synthetic.label_noise); }},
      {"synthetic", "feature_noise",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.feature_noise = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.data.synthetic.feature_noise); }},
      {"synthetic", "nonlinearity",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.nonlinearity = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.data.synthetic.nonlinearity); }},
      {"synthetic", "seed",
       [](RunConfig& c, const std::string& v) { c.data.synthetic.seed = parse_uint(v); },
       [](const RunConfig& c) { return std::to_string(c.data.synthetic.seed); }},

      {"model", "kind",
       [](RunConfig& c, const std::string& v) { c.model.kind = ModelKind::parse(v); },
       [](const RunConfig& c) { return c.model.kind.abbreviation(); }},
      {"model", "hidden_dims",
       [](RunConfig& c, const std::string& v) { c.model.hidden_dims = parse_counts(v); },
       [](const RunConfig& c) { return join<std::size_t>(c.model.hidden_dims, count_text); }},

      {"train", "learning_rate",
       [](RunConfig& c, const std::string& v) { c.train.learning_rate = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.learning_rate); }},
      {"train", "batch_size",
       [](RunConfig& c, const std::string& v) { c.train.batch_size = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.train.batch_size); }},
      {"train", "early_stop_min_delta",
       [](RunConfig& c, const std::string& v) { c.train.early_stop_min_delta = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.early_stop_min_delta); }},
      {"train", "patience",
       [](RunConfig& c, const std::string& v) { c.train.patience = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.train.patience); }},
      {"train", "max_epochs",
       [](RunConfig& c, const std::string& v) { c.train.max_epochs = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.train.max_epochs); }},
      {"train", "seed",
       [](RunConfig& c, const std::string& v) { c.train.seed = parse_uint(v); },
       [](const RunConfig& c) { return std::to_string(c.train.seed); }},
      {"train", "loss_combiner",
       [](RunConfig& c, const std::string& v) { c.train.combiner = combiner_from_name(v); },
       [](const RunConfig& c) { return std::string(combiner_name(c.train.combiner)); }},
      {"train", "naive_lambda",
       [](RunConfig& c, const std::string& v) { c.train.naive_lambda = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.naive_lambda); }},
      {"train", "imbalance",
       [](RunConfig& c, const std::string& v) { c.train.imbalance = imbalance_from_name(v); },
       [](const RunConfig& c) { return std::string(imbalance_name(c.train.imbalance)); }},
      {"train", "classifier_class_weights",
       [](RunConfig& c, const std::string& v) {
         c.train.classifier_class_weights = parse_bool(v);
       },
       [](const RunConfig& c) { return bool_text(c.train.classifier_class_weights); }},
      {"train", "monitor_validation",
       [](RunConfig& c, const std::string& v) { c.train.monitor_validation = parse_bool(v); },
       [](const RunConfig& c) { return bool_text(c.train.monitor_validation); }},
      {"train", "smote_neighbors",
       [](RunConfig& c, const std::string& v) { c.train.smote_neighbors = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.train.smote_neighbors); }},
      {"train", "mlp_hidden",
       [](RunConfig& c, const std::string& v) { c.train.mlp_hidden = parse_counts(v); },
       [](const RunConfig& c) { return join<std::size_t>(c.train.mlp_hidden, count_text); }},

      {"metrics", "beta_policy",
       [](RunConfig& c, const std::string& v) {
         if (v == "imbalance_ratio") c.metrics.beta_policy = BetaPolicy::Kind::per_head_imbalance_ratio;
         else if (v == "fixed") c.metrics.beta_policy = BetaPolicy::Kind::fixed;
         else throw ConfigError("expected imbalance_ratio or fixed, got '" + v + "'");
       },
       [](const RunConfig& c) { return beta_policy_name(c.metrics.beta_policy); }},
      {"metrics", "fixed_beta",
       [](RunConfig& c, const std::string& v) { c.metrics.fixed_beta = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.metrics.fixed_beta); }},

      {"experiment", "models",
       [](RunConfig& c, const std::string& v) {
         c.experiment.models.clear();
         for (const auto& m : split_list(v)) c.experiment.models.push_back(ModelKind::parse(m));
       },
       [](const RunConfig& c) {
         return join<ModelKind>(c.experiment.models, [](auto& m) { return m.abbreviation(); });
       }},
      {"experiment", "imbalance",
       [](RunConfig& c, const std::string& v) {
         c.experiment.imbalance.clear();
         for (const auto& m : split_list(v)) {
           c.experiment.imbalance.push_back(imbalance_from_name(m));
         }
       },
       [](const RunConfig& c) {
         return join<ImbalanceMethod>(c.experiment.imbalance,
                                      [](auto& m) { return std::string(imbalance_name(m)); });
       }},
      {"experiment", "combiners",
       [](RunConfig& c, const std::string& v) {
         c.experiment.combiners.clear();
         for (const auto& m : split_list(v)) {
           c.experiment.combiners.push_back(combiner_from_name(m));
         }
       },
       [](const RunConfig& c) {
         return join<LossCombiner>(c.experiment.combiners,
                                   [](auto& m) { return std::string(combiner_name(m)); });
       }},
      {"experiment", "seeds",
       [](RunConfig& c, const std::string& v) {
         c.experiment.seeds.clear();
         for (const auto& s : split_list(v)) c.experiment.seeds.push_back(parse_uint(s));
       },
       [](const RunConfig& c) {
         return join<std::uint64_t>(c.experiment.seeds,
                                    [](auto& s) { return std::to_string(s); });
       }},
      {"experiment", "jobs",
       [](RunConfig& c, const std::string& v) { c.experiment.jobs = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.experiment.jobs); }},

      {"headmode", "epochs",
       [](RunConfig& c, const std::string& v) { c.headmode.epochs = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.headmode.epochs); }},
      {"headmode", "reference_epoch",
       [](RunConfig& c, const std::string& v) { c.headmode.reference_epoch = parse_count(v); },
       [](const RunConfig& c) { return std::to_string(c.headmode.reference_epoch); }},

      {"output", "dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }, nullptr},
  };
  return table;
}

}  // namespace

ExperimentConfig::ExperimentConfig()
    : models{ModelKind::parse("LR"), ModelKind::parse("NN"), ModelKind::parse("QAE+LR"),
             ModelKind::parse("QAE+NN"), ModelKind::parse("SQAE+LR"),
             ModelKind::parse("SQAE+NN")} {}

void RunConfig::validate() const {
  train.validate();
  if (model.hidden_dims.empty()) throw ConfigError("[model] hidden_dims must not be empty");
  for (const std::size_t h : model.hidden_dims) {
    if (h == 0) throw ConfigError("[model] hidden_dims entries must be positive");
  }
  if (data.source == DataSource::synthetic) data.synthetic.validate();
  if (data.source == DataSource::csv && data.train_csv.empty()) {
    throw ConfigError("[data] train_csv is required when source = csv");
  }
  if (data.source == DataSource::csv && data.schema.label_columns.empty()) {
    throw ConfigError("[data] label_columns is required when source = csv");
  }
  if (!(metrics.fixed_beta > 0.0)) throw ConfigError("[metrics] fixed_beta must be positive");
  if (experiment.models.empty() || experiment.imbalance.empty() ||
      experiment.combiners.empty() || experiment.seeds.empty()) {
    throw ConfigError("[experiment] every grid axis needs at least one entry");
  }
  if (experiment.jobs == 0) throw ConfigError("[experiment] jobs must be positive");
  if (headmode.reference_epoch == 0 || headmode.reference_epoch > headmode.epochs) {
    throw ConfigError("[headmode] reference_epoch must lie in [1, epochs]");
  }
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("config: key '" + section + "' is outside any section");
    }
    for (const auto& [key, value] : body) {
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) {
        return section == f.section && key == f.key;
      });
      if (it == table.end()) {
        throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      }
      try {
        it->set(config, trim(value.data()));
      } catch (const ConfigError& e) {
        throw ConfigError("config: [" + section + "] " + key + ": " + e.what());
      }
    }
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string echo_config(const RunConfig& config) {
  std::string out;
  std::string current;
  for (const Field& f : fields()) {
    if (!f.get) continue;
    if (current != f.section) {
      if (!current.empty()) out += "\n";
      current = f.section;
      out += "[" + current + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(config) + "\n";
  }
  return out;
}

BetaPolicy beta_policy(const MetricsConfig& metrics, const HeadLabels& train_labels) {
  if (metrics.beta_policy == BetaPolicy::Kind::fixed) return BetaPolicy::fixed(metrics.fixed_beta);
  return BetaPolicy::from_training(train_labels);
}

}  // namespace softsense::app
