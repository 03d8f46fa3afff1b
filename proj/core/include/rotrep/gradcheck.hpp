#pragma once

#include <cstddef>
#include <cstdint>

#include "rotrep/decoders.hpp"

namespace rotrep::ad {

struct GradCheckResult {
  RepresentationKind kind;
  LossKind loss = LossKind::L2;
  std::size_t points = 0;
  /// Candidates discarded for lying within `margin` of a domain edge.
  std::size_t rejected = 0;
  double max_rel_error = 0.0;
};

/// Compares reverse-mode gradients of loss(f(r), M) with respect to r
/// against central differences at `points` random r near the image of g.
/// Per-point error is ‖analytic − numeric‖ / max(‖analytic‖, ‖numeric‖, 1e-8).
GradCheckResult gradcheck_decoder(const RepresentationKind& kind, LossKind loss, std::size_t points,
                                  std::uint64_t seed, double h = 1e-5, double margin = 1e-3);

}  // namespace rotrep::ad
