#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "softsense/model.hpp"

namespace softsense {

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to reproduce predictions and metrics of a trained model.
struct Checkpoint {
  ModelKind kind;
  StackedModel model;
  std::vector<std::string> feature_names;
  std::vector<std::string> head_names;
  /// {n^0, n^1} per head on the training split; fixes β for evaluation.
  std::vector<std::array<std::size_t, 2>> train_class_sizes;
  std::uint64_t seed = 0;
  /// Run configuration in its canonical text form.
  std::string config_echo;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// JSON document; every double is written in its shortest round-trip form.
std::string checkpoint_to_string(const Checkpoint& ckpt);
/// Throws DataError on a malformed or unsupported document.
Checkpoint checkpoint_from_string(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace softsense
