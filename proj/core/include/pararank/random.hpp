#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pararank {

// std::mt19937_64 and std::seed_seq are fully specified by the standard, but
// the standard distributions are not. These helpers keep seeded output
// identical across standard library implementations.

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform integer in [0, n). n must be > 0.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

/// Uniform real in [0, 1).
double uniform_unit(std::mt19937_64& rng);

/// Standard normal deviate (Box-Muller).
double standard_normal(std::mt19937_64& rng);

}  // namespace pararank
