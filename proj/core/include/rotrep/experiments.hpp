#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotrep/decoders.hpp"
#include "rotrep/mlp.hpp"
#include "rotrep/reps.hpp"

namespace rotrep {

enum class SamplerKind { AxisAngle, Haar };

std::string_view to_string(SamplerKind sampler);
SamplerKind parse_sampler(std::string_view name);

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  std::vector<RepresentationKind> kinds;
  ad::LossKind loss = ad::LossKind::L2;
  SamplerKind sampler = SamplerKind::AxisAngle;
  /// Evaluate on a different sampler than the one used for training.
  std::optional<SamplerKind> test_sampler;
  std::size_t iterations = 50000;
  std::size_t batch_size = 64;
  ad::LrSchedule schedule;
  std::size_t test_set_size = 10000;
  std::size_t eval_every = 1000;
  std::uint64_t seed = 0;
  /// Upper bound of the axis-angle sampler's angle.
  double max_angle = std::numbers::pi;
  double leaky_slope = 0.01;
  std::vector<std::size_t> hidden = {128, 128, 128};
  /// Kinds trained concurrently; 1 runs them one after another.
  std::size_t threads = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// key = value lines, '#' comments. See README for the keys.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one key = value pair (shared by the file parser and CLI overrides).
void apply_config_key(ExperimentConfig& config, std::string_view key, std::string_view value);

inline constexpr std::array<int, 8> kPercentileGrid = {10, 25, 50, 75, 90, 95, 99, 100};

/// Nearest-rank percentiles on kPercentileGrid. Throws EmptyInput.
std::array<double, 8> error_percentiles(std::vector<double> errors);

struct CurvePoint {
  std::size_t iteration = 0;
  double mean_error_deg = 0.0;
  double test_loss = 0.0;
  /// Mean training-batch loss since the previous eval point (NaN at iteration 0).
  double train_loss = 0.0;
};

struct RunReport {
  RepresentationKind kind;
  std::vector<CurvePoint> curve;
  double mean_deg = 0.0;
  double max_deg = 0.0;
  double std_deg = 0.0;
  std::array<double, 8> percentiles{};
  std::size_t skipped_batches = 0;
  std::size_t failed_decodes = 0;
  double wall_seconds = 0.0;
  ad::MlpModel model;
};

std::vector<RotationMatrix> sample_rotations(SamplerKind sampler, std::size_t count, Rng& rng,
                                             double max_angle = std::numbers::pi);

/// Trains one encoder per kind and evaluates it on a fixed test set.
std::vector<RunReport> run_sanity_test(const ExperimentConfig& config);
RunReport run_single(const ExperimentConfig& config, const RepresentationKind& kind);

/// curve_<kind>.csv per kind, percentiles.csv, manifest.json.
void write_report(const ExperimentConfig& config, const std::vector<RunReport>& reports,
                  const std::filesystem::path& out_dir);

}  // namespace rotrep
