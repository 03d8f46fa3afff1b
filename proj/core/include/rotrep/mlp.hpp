#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "rotrep/sampling.hpp"
#include "rotrep/tape.hpp"

namespace rotrep::ad {

/// y = x·W + b with W stored as fan_in × fan_out.
struct DenseLayer {
  Tensor weight;
  Tensor bias;  // 1 × fan_out
};

/// Fully-connected encoder: Leaky ReLU after every layer except the last.
struct MlpModel {
  std::vector<DenseLayer> layers;
  double leaky_slope = 0.01;

  /// widths = {in, hidden..., out}. Weights and biases drawn from
  /// U(−√(1/fan_in), +√(1/fan_in)).
  static MlpModel create(const std::vector<std::size_t>& widths, Rng& rng, double leaky_slope = 0.01);
  /// The sanity-test encoder 9 → 128 → 128 → 128 → output_dim.
  static MlpModel sanity_encoder(std::size_t output_dim, Rng& rng, double leaky_slope = 0.01);

  std::size_t input_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weight.rows()); }
  std::size_t output_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weight.cols()); }
  std::size_t parameter_count() const;

  /// Parameter tensors in a fixed order: w0, b0, w1, b1, …
  std::vector<const Tensor*> parameters() const;
  std::vector<Tensor*> parameters();
};

struct MlpTrace {
  std::vector<Var> params;  // same order as MlpModel::parameters()
  Var output;
};

/// Records the forward pass of a B×in batch on the tape.
MlpTrace mlp_forward(Tape& tape, const MlpModel& model, Var input);
/// Forward pass without recording (evaluation).
Tensor mlp_predict(const MlpModel& model, const Tensor& input);

struct LrSchedule {
  double initial = 1e-5;
  std::size_t switch_iteration = 10000;
  double after = 1e-6;

  double at(std::size_t iteration) const { return iteration < switch_iteration ? initial : after; }
};

struct AdamState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::size_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  LrSchedule schedule;

  static AdamState for_model(const MlpModel& model, LrSchedule schedule = {});
};

/// One bias-corrected Adam update. The learning rate is taken from the
/// schedule at the current step count (0-based), which then increments.
void adam_step(MlpModel& model, const std::vector<Tensor>& grads, AdamState& state);

/// Text checkpoint; see README for the format.
void save_checkpoint(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_checkpoint(const std::filesystem::path& path);

}  // namespace rotrep::ad
