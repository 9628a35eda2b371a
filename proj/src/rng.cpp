#include "subsql/rng.hpp"

namespace subsql {

namespace {

// splitmix64 finalizer: a cheap, well-mixed 64-bit hash.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix(mix(master) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 1));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_a, std::uint64_t stream_b) {
    return derive_seed(derive_seed(master, stream_a), stream_b);
}

std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(master, stream));
}

}  // namespace subsql
