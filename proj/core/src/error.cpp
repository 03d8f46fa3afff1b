#include "rotrep/error.hpp"

namespace rotrep {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NearZeroInput: return "NearZeroInput";
    case ErrorKind::NearZeroAxis: return "NearZeroAxis";
    case ErrorKind::NearZeroScale: return "NearZeroScale";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ProjectionPole: return "ProjectionPole";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::InvalidKind: return "InvalidKind";
    case ErrorKind::NotRotation: return "NotRotation";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rotrep
