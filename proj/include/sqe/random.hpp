#pragma once

#include <cstdint>
#include <random>

#include "sqe/qcore.hpp"

namespace sqe {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20130917;

/// Haar-distributed unit vector over `dims`.
PureState random_pure_state(const SubsystemDims& dims, Rng& rng);
/// Mixed state obtained by tracing a Haar-random purification of the given rank.
DensityOperator random_density(const SubsystemDims& dims, Rng& rng, int rank = 0);
/// Haar unitary via QR of a complex Ginibre matrix with phase correction.
CMatrix random_unitary(int dim, Rng& rng);
/// Random isometry: leading `cols` columns of a Haar unitary.
CMatrix random_isometry(int rows, int cols, Rng& rng);
/// Channel whose Stinespring isometry is Haar-random.
FiniteChannel random_channel(int in_dim, int out_dim, int kraus_count, Rng& rng);

}  // namespace sqe
