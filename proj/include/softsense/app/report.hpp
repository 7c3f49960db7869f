#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "softsense/metrics.hpp"
#include "softsense/training.hpp"

namespace softsense::app {

inline constexpr const char* kUndefined = "undefined";

/// Fixed 4-decimal text, or "undefined".
std::string fixed4(std::optional<double> v);
/// Shortest round-trip text, or "undefined".
std::string full_precision(std::optional<double> v);

/// Left-aligned first column, right-aligned numeric columns.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> headers);
  void add_row(std::vector<std::string> cells);
  std::string render() const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<std::string>> rows_;
};

std::string metrics_csv(const MetricsReport& report);
std::string metrics_text(const MetricsReport& report);

/// One row per epoch of every stage: stage,epoch,updates,J,J_x,J_y,sigma1_sq,sigma2_sq.
/// Stages are layer1..layerN then classifier; inapplicable fields are empty.
std::string history_csv(const StackTrainResult& result);
std::string history_csv(const std::vector<std::pair<std::string, const LossHistory*>>& stages);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace softsense::app
