#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rotrep/reps.hpp"
#include "rotrep/rotation.hpp"

namespace rotrep {

enum class Axis { X, Y, Z };

char axis_label(Axis axis);
Axis parse_axis(char label);

struct CurveSample {
  double theta;
  RotationMatrix rotation;
};

/// Closed loop of rotations about one canonical axis, θ_i = i·2π/N.
struct RotationCurve {
  Axis axis = Axis::Z;
  double step = 0.0;
  std::vector<CurveSample> samples;
};

RotationCurve make_axis_curve(Axis axis, std::size_t n_samples);

struct JumpReport {
  RepresentationKind kind;
  Axis axis = Axis::Z;
  double step = 0.0;
  double max_jump = 0.0;
  /// θ of the sample that starts the largest jump.
  double max_jump_theta = 0.0;
  double fitted_lipschitz = 0.0;
};

/// Largest Euclidean distance between encodings of consecutive samples,
/// including the wrap from the last sample back to the first.
JumpReport jump_statistic(const RepresentationKind& kind, const RotationCurve& curve);

struct PcaCurveRow {
  std::string representation;
  char axis;
  double theta;
  double pc1;
  double pc2;
};

/// Encodes every curve with every kind and keeps the top two principal
/// components per (kind, curve) pair.
std::vector<PcaCurveRow> pca_curves(const std::vector<RepresentationKind>& kinds,
                                    const std::vector<RotationCurve>& curves);

/// Writes `pca_curves` as CSV: representation,axis,theta,pc1,pc2.
void export_pca_curves(const std::vector<RepresentationKind>& kinds, const std::vector<RotationCurve>& curves,
                       const std::filesystem::path& out_path);

std::vector<PcaCurveRow> read_pca_csv(const std::filesystem::path& path);

}  // namespace rotrep
