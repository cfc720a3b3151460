#pragma once

// Seeded streams. Every random draw in the library comes from a stream
// derived from (seed, index, salt) so results never depend on execution order.

#include "opspace/matcore.hpp"

#include <cstdint>
#include <random>

namespace opspace {

std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t index, std::uint32_t salt = 0);

/// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary
/// parts N(0, 1)), filled column by column.
ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen);

}  // namespace opspace
