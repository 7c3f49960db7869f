#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softsense {

enum class ErrorKind {
  shape,
  config,
  data,
  insufficient_data,
  numeric,
  internal,
};

const char* error_kind_name(ErrorKind kind);

/// Base of every error the toolkit throws. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& what)
      : Error(ErrorKind::insufficient_data, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

/// Non-finite value encountered. Training errors carry the epoch and batch.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
  NumericError(const std::string& what, std::size_t epoch, std::size_t batch)
      : Error(ErrorKind::numeric, what + " (epoch " + std::to_string(epoch) +
                                      ", batch " + std::to_string(batch) + ")"),
        epoch_(epoch),
        batch_(batch),
        located_(true) {}

  bool located() const noexcept { return located_; }
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_ = 0;
  std::size_t batch_ = 0;
  bool located_ = false;
};

}  // namespace softsense
