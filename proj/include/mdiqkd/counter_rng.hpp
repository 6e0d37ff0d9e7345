#ifndef MDIQKD_COUNTER_RNG_HPP
#define MDIQKD_COUNTER_RNG_HPP

#include <cstdint>

namespace mdiqkd {

// Stateless generator: every draw is a pure function of (seed, index, stream),
// so Monte-Carlo samples can be produced in any order or on any thread.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

// Uniform in (0, 1), never exactly 0 or 1.
double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

// Standard normal via Box-Muller on streams (2k, 2k+1).
double counter_normal(std::uint64_t seed, std::uint64_t index, std::uint64_t k);

}  // namespace mdiqkd

#endif  // MDIQKD_COUNTER_RNG_HPP
