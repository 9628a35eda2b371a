#pragma once

#include <cstdint>
#include <random>

namespace subsql {

// Stream-splitting for reproducible simulations: every (master seed, stream id)
// pair yields an independent, stable engine seed, so regenerating one component
// never depends on how many draws another component consumed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_a, std::uint64_t stream_b);

// For a seed that has already been derived (or a raw master used directly).
std::mt19937_64 make_engine(std::uint64_t seed);
std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream);

}  // namespace subsql
