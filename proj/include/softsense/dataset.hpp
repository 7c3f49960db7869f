#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softsense/errors.hpp"
#include "softsense/labels.hpp"
#include "softsense/matrix.hpp"

namespace softsense {

struct Dataset {
  Matrix features;
  HeadLabels labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> head_names;

  std::size_t size() const noexcept { return features.rows(); }
  /// Throws DataError if row counts or name lists disagree with the data.
  void validate() const;
  Dataset gather_rows(std::span<const std::size_t> indices) const;
};

enum class CsvErrorKind { missing_file, malformed_row, unknown_column, bad_value };

class CsvError : public DataError {
 public:
  CsvError(CsvErrorKind kind, const std::string& what) : DataError(what), csv_kind_(kind) {}
  CsvErrorKind csv_kind() const noexcept { return csv_kind_; }

 private:
  CsvErrorKind csv_kind_;
};

/// Column roles for load_csv. An empty feature list means "every column not
/// named as a label".
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::vector<std::string> label_columns;
};

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);
/// Column names from the first line.
std::vector<std::string> csv_header(const std::filesystem::path& path);
/// Features then labels; labels as "0", "1" or empty.
void save_csv(const std::filesystem::path& path, const Dataset& ds);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
/// Strict full-string parse; nullopt on failure.
std::optional<double> parse_double(std::string_view text);

inline constexpr double kStddevFloor = 1e-12;

/// Per-feature mean and population standard deviation.
struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t width() const noexcept { return mean.size(); }
  friend bool operator==(const StandardizationStats&, const StandardizationStats&) = default;
};

StandardizationStats standardize_fit(const Matrix& train_features);
Matrix standardize_apply(const StandardizationStats& stats, const Matrix& features);
Matrix standardize_inverse(const StandardizationStats& stats, const Matrix& standardized);

struct SplitFractions {
  double train = 0.7;
  double val = 0.0;
  double test = 0.3;
};

struct DatasetSplit {
  Dataset train;
  Dataset val;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  std::vector<std::size_t> test_rows;
};

/// Seeded disjoint partition. With `stratify_head`, each part keeps that
/// head's class proportions (missing entries form their own stratum).
DatasetSplit split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed,
                   std::optional<std::size_t> stratify_head = std::nullopt);

/// Single-head view: one row per observed (sample, head) pair with the head
/// identity one-hot appended to the features.
Dataset flatten_heads(const Dataset& ds);

}  // namespace softsense
