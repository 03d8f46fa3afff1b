#pragma once

#include <cstddef>

#include "rotrep/reps.hpp"
#include "rotrep/sampling.hpp"

namespace rotrep {

struct RoundTripSummary {
  RepresentationKind kind;
  std::size_t samples = 0;
  double max_error = 0.0;
  RoundTripSpec spec{RoundTripMetric::Frobenius, 0.0};

  bool passed() const { return max_error <= spec.tolerance; }
};

/// Tolerance used for Sim(n): Frobenius distance of αR plus the translation error.
inline constexpr double kSimilarityTolerance = 1e-9;

/// Max f(g(x)) error over `samples` draws. SO(3) kinds alternate between the
/// Haar and axis-angle samplers; O(n) uses Haar O(n); Sim(n) draws a
/// log-normal scale, Haar rotation and Gaussian translation.
RoundTripSummary roundtrip_suite(const RepresentationKind& kind, std::size_t samples, Rng& rng);

/// Max |repr_compose(r1, r2) − g(f(r1)·f(r2))| over `pairs` Haar pairs in SO(n).
double composition_gap(std::size_t n, std::size_t pairs, Rng& rng);

}  // namespace rotrep
