#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotrep {

enum class ErrorKind {
  NearZeroInput,
  NearZeroAxis,
  NearZeroScale,
  DimensionMismatch,
  DegenerateInput,
  ProjectionPole,
  InvalidK,
  InvalidKind,
  NotRotation,
  EmptyInput,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers which
/// domain condition fired so they can count or skip instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rotrep
