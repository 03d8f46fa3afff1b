#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "rotrep/rotation.hpp"

namespace rotrep {

using Rng = std::mt19937_64;

/// Independent sub-stream seed for `label` (splitmix64 over seed ^ FNV-1a(label)).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

/// Axis uniform on S², angle uniform on [0, max_angle].
AxisAngle sample_axis_angle_params(Rng& rng, double max_angle = std::numbers::pi);
RotationMatrix sample_axis_angle(Rng& rng, double max_angle = std::numbers::pi);

/// Haar-uniform SO(3): normalized Gaussian 4-vector read as a unit quaternion.
RotationMatrix sample_uniform_so3(Rng& rng);

/// Haar-uniform SO(n) for n >= 2: Householder QR of a Gaussian matrix, Q
/// columns flipped to make diag(R) positive, last column negated if det = −1.
RotationMatrix sample_uniform_so_n(std::size_t n, Rng& rng);

/// Haar-uniform O(n): an SO(n) draw whose last column is negated with
/// probability 1/2.
Matrix sample_uniform_o_n(std::size_t n, Rng& rng);

}  // namespace rotrep
