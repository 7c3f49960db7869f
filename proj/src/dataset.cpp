#include "softsense/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "softsense/rng.hpp"

namespace softsense {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
      field.remove_suffix(1);
    }
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
      field = field.substr(1, field.size() - 2);
    }
    fields.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string coord(std::size_t line_no, const std::string& column) {
  return "line " + std::to_string(line_no) + ", column '" + column + "'";
}

}  // namespace

void Dataset::validate() const {
  if (labels.n_samples() != features.rows()) {
    throw DataError("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.n_samples()) + " label rows");
  }
  if (feature_names.size() != features.cols()) {
    throw DataError("dataset has " + std::to_string(features.cols()) + " feature columns but " +
                    std::to_string(feature_names.size()) + " feature names");
  }
  if (head_names.size() != labels.n_heads()) {
    throw DataError("dataset has " + std::to_string(labels.n_heads()) + " heads but " +
                    std::to_string(head_names.size()) + " head names");
  }
}

Dataset Dataset::gather_rows(std::span<const std::size_t> indices) const {
  return Dataset{features.gather_rows(indices), labels.gather_rows(indices), feature_names,
                 head_names};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return v;
}

namespace {

std::vector<std::string> read_header(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError(CsvErrorKind::malformed_row, "'" + path.string() + "' has no header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return split_line(line);
}

std::ifstream open_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CsvError(CsvErrorKind::missing_file, "cannot open '" + path.string() + "'");
  }
  return in;
}

}  // namespace

std::vector<std::string> csv_header(const std::filesystem::path& path) {
  std::ifstream in = open_csv(path);
  return read_header(in, path);
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in = open_csv(path);
  std::string line;
  const std::vector<std::string> header = read_header(in, path);
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) column_of.emplace(header[c], c);

  auto resolve = [&](const std::string& name) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) {
      throw CsvError(CsvErrorKind::unknown_column,
                     "column '" + name + "' not found in '" + path.string() + "'");
    }
    return it->second;
  };

  std::vector<std::size_t> label_cols;
  for (const auto& name : schema.label_columns) label_cols.push_back(resolve(name));
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  if (schema.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (std::find(label_cols.begin(), label_cols.end(), c) == label_cols.end()) {
        feature_cols.push_back(c);
        feature_names.push_back(header[c]);
      }
    }
  } else {
    for (const auto& name : schema.feature_columns) {
      feature_cols.push_back(resolve(name));
      feature_names.push_back(name);
    }
  }

  std::vector<double> values;
  std::vector<Label> label_values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw CsvError(CsvErrorKind::malformed_row,
                     "line " + std::to_string(line_no) + " of '" + path.string() + "' has " +
                         std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(header.size()));
    }
    for (const std::size_t c : feature_cols) {
      const auto v = parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        throw CsvError(CsvErrorKind::bad_value, "non-numeric feature value '" + fields[c] +
                                                    "' at " + coord(line_no, header[c]));
      }
      values.push_back(*v);
    }
    for (const std::size_t c : label_cols) {
      const std::string& f = fields[c];
      if (f.empty()) {
        label_values.push_back(Label::missing);
      } else if (f == "0") {
        label_values.push_back(Label::negative);
      } else if (f == "1") {
        label_values.push_back(Label::positive);
      } else {
        throw CsvError(CsvErrorKind::bad_value,
                       "label value '" + f + "' is not 0, 1 or empty at " +
                           coord(line_no, header[c]));
      }
    }
    ++rows;
  }

  Dataset ds;
  ds.features = Matrix(rows, feature_cols.size(), std::move(values));
  ds.labels = HeadLabels(rows, label_cols.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < label_cols.size(); ++j) {
      ds.labels(i, j) = label_values[i * label_cols.size() + j];
    }
  }
  ds.feature_names = std::move(feature_names);
  ds.head_names = schema.label_columns;
  return ds;
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  ds.validate();
  std::ofstream out(path);
  if (!out) {
    throw CsvError(CsvErrorKind::missing_file, "cannot write '" + path.string() + "'");
  }
  bool first = true;
  for (const auto& name : ds.feature_names) {
    out << (first ? "" : ",") << name;
    first = false;
  }
  for (const auto& name : ds.head_names) {
    out << (first ? "" : ",") << name;
    first = false;
  }
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    first = true;
    for (const double v : ds.features.row(i)) {
      out << (first ? "" : ",") << format_double(v);
      first = false;
    }
    for (std::size_t j = 0; j < ds.labels.n_heads(); ++j) {
      out << (first ? "" : ",");
      first = false;
      switch (ds.labels(i, j)) {
        case Label::negative: out << '0'; break;
        case Label::positive: out << '1'; break;
        case Label::missing: break;
      }
    }
    out << '\n';
  }
}

StandardizationStats standardize_fit(const Matrix& train_features) {
  if (train_features.rows() == 0) {
    throw DataError("standardize_fit: no training rows");
  }
  const std::size_t n = train_features.rows();
  const std::size_t d = train_features.cols();
  StandardizationStats stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = train_features.row(i);
    for (std::size_t c = 0; c < d; ++c) stats.mean[c] += row[c];
  }
  for (double& m : stats.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = train_features.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      const double dev = row[c] - stats.mean[c];
      stats.stddev[c] += dev * dev;
    }
  }
  for (double& s : stats.stddev) s = std::sqrt(s / static_cast<double>(n));
  return stats;
}

Matrix standardize_apply(const StandardizationStats& stats, const Matrix& features) {
  if (features.cols() != stats.width()) {
    throw ShapeError("standardize_apply: stats fitted on " + std::to_string(stats.width()) +
                     " features, input is " + features.shape_string());
  }
  Matrix out = features;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = (row[c] - stats.mean[c]) / std::max(stats.stddev[c], kStddevFloor);
    }
  }
  return out;
}

Matrix standardize_inverse(const StandardizationStats& stats, const Matrix& standardized) {
  if (standardized.cols() != stats.width()) {
    throw ShapeError("standardize_inverse: stats fitted on " + std::to_string(stats.width()) +
                     " features, input is " + standardized.shape_string());
  }
  Matrix out = standardized;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = row[c] * std::max(stats.stddev[c], kStddevFloor) + stats.mean[c];
    }
  }
  return out;
}

namespace {

/// Part sizes for m rows: round train and val, the remainder goes to test.
std::array<std::size_t, 3> part_sizes(std::size_t m, const SplitFractions& f) {
  const auto md = static_cast<double>(m);
  std::size_t train = static_cast<std::size_t>(std::llround(f.train * md));
  std::size_t val = static_cast<std::size_t>(std::llround(f.val * md));
  train = std::min(train, m);
  val = std::min(val, m - train);
  std::size_t test = m - train - val;
  if (f.test <= 0.0 && test > 0) {
    // All rounding slack goes to a nonempty part.
    if (f.val > 0.0) {
      val += test;
    } else {
      train += test;
    }
    test = 0;
  }
  return {train, val, test};
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.uniform_index(i)]);
  }
}

}  // namespace

DatasetSplit split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed,
                   std::optional<std::size_t> stratify_head) {
  ds.validate();
  if (fractions.train < 0.0 || fractions.val < 0.0 || fractions.test < 0.0 ||
      std::abs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be non-negative and sum to 1");
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> strata;
  if (stratify_head) {
    if (*stratify_head >= ds.labels.n_heads()) {
      throw ConfigError("stratify head " + std::to_string(*stratify_head) + " out of range");
    }
    const std::size_t parts = (fractions.train > 0.0) + (fractions.val > 0.0) +
                              (fractions.test > 0.0);
    strata.resize(3);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      switch (ds.labels(i, *stratify_head)) {
        case Label::negative: strata[0].push_back(i); break;
        case Label::positive: strata[1].push_back(i); break;
        case Label::missing: strata[2].push_back(i); break;
      }
    }
    for (std::size_t t = 0; t < 2; ++t) {
      if (strata[t].size() < parts) {
        throw DataError("stratification: class " + std::to_string(t) + " of head '" +
                        ds.head_names[*stratify_head] + "' has " +
                        std::to_string(strata[t].size()) + " samples for " +
                        std::to_string(parts) + " parts");
      }
    }
  } else {
    strata.emplace_back(ds.size());
    std::iota(strata[0].begin(), strata[0].end(), std::size_t{0});
  }

  DatasetSplit out;
  for (auto& stratum : strata) {
    shuffle(stratum, rng);
    const auto sizes = part_sizes(stratum.size(), fractions);
    auto it = stratum.begin();
    out.train_rows.insert(out.train_rows.end(), it, it + static_cast<std::ptrdiff_t>(sizes[0]));
    it += static_cast<std::ptrdiff_t>(sizes[0]);
    out.val_rows.insert(out.val_rows.end(), it, it + static_cast<std::ptrdiff_t>(sizes[1]));
    it += static_cast<std::ptrdiff_t>(sizes[1]);
    out.test_rows.insert(out.test_rows.end(), it, stratum.end());
  }
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.val_rows.begin(), out.val_rows.end());
  std::sort(out.test_rows.begin(), out.test_rows.end());
  out.train = ds.gather_rows(out.train_rows);
  out.val = ds.gather_rows(out.val_rows);
  out.test = ds.gather_rows(out.test_rows);
  return out;
}

Dataset flatten_heads(const Dataset& ds) {
  ds.validate();
  const std::size_t d = ds.features.cols();
  const std::size_t heads = ds.labels.n_heads();
  std::vector<double> values;
  std::vector<Label> targets;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < heads; ++j) {
      if (!ds.labels.observed(i, j)) continue;
      const auto row = ds.features.row(i);
      values.insert(values.end(), row.begin(), row.end());
      for (std::size_t h = 0; h < heads; ++h) values.push_back(h == j ? 1.0 : 0.0);
      targets.push_back(ds.labels(i, j));
    }
  }
  Dataset out;
  out.features = Matrix(targets.size(), d + heads, std::move(values));
  out.labels = HeadLabels(targets.size(), 1);
  for (std::size_t i = 0; i < targets.size(); ++i) out.labels(i, 0) = targets[i];
  out.feature_names = ds.feature_names;
  for (const auto& name : ds.head_names) out.feature_names.push_back("head=" + name);
  out.head_names = {"outcome"};
  return out;
}

}  // namespace softsense
