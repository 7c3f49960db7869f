#include "softsense/errors.hpp"

namespace softsense {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return "shape_error";
    case ErrorKind::config: return "config_error";
    case ErrorKind::data: return "data_error";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::numeric: return "numeric_divergence";
    case ErrorKind::internal: return "internal_error";
  }
  return "internal_error";
}

}  // namespace softsense
