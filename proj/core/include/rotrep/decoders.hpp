#pragma once

#include <string_view>

#include "rotrep/reps.hpp"
#include "rotrep/tape.hpp"

namespace rotrep::ad {

/// Records the map f for `kind` on the tape. `r` is B×D; the result is B×n²
/// holding each decoded matrix in row-major order. Values agree with
/// `rotrep::decode`; failures raise the same error kinds (DegenerateInput for
/// Gram-Schmidt spans, NearZeroInput for quaternion norms, NearZeroAxis).
Var decoder_forward(Tape& tape, const RepresentationKind& kind, Var r);

enum class LossKind { L2, Geodesic };

std::string_view to_string(LossKind loss);
LossKind parse_loss(std::string_view name);

/// Batch mean of ‖M_pred − M_true‖²_F. Both B×9 (or B×n²).
Var loss_l2(Tape& tape, Var pred, Var truth);

inline constexpr double kGeodesicClampMargin = 1e-7;

/// Batch mean of acos(clamp((Tr(M_pred·M_trueᵀ) − 1)/2, −1 + margin, 1 − margin)).
Var loss_geodesic(Tape& tape, Var pred, Var truth, double margin = kGeodesicClampMargin);

/// Dispatches to loss_l2 / loss_geodesic.
Var loss(Tape& tape, LossKind kind, Var pred, Var truth);

/// Packs rotations into a B×n² row-major tensor.
Tensor pack_rotations(const std::vector<RotationMatrix>& rotations);

}  // namespace rotrep::ad
