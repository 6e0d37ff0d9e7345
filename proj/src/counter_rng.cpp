#include "mdiqkd/counter_rng.hpp"

#include <cmath>
#include <numbers>

namespace mdiqkd {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    return mix(mix(mix(seed) ^ index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    // top 53 bits, shifted half a ulp off zero
    std::uint64_t bits = counter_hash(seed, index, stream) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double counter_normal(std::uint64_t seed, std::uint64_t index, std::uint64_t k) {
    double u1 = counter_uniform(seed, index, 2 * k);
    double u2 = counter_uniform(seed, index, 2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mdiqkd
