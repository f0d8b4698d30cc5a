#pragma once

#include <array>
#include <cstdint>

namespace levelcross::rng {

// Identifies one independent stream position: every (seed, trial, slot)
// triple maps to its own Philox block, so draws never depend on which
// thread produced them or in what order.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t slot = 0;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// The 128-bit block for a key: counter = (slot, trial), key = seed.
PhiloxCounter block(const StreamKey& key);

// Uniform on the open interval (0, 1), 53-bit resolution.
double uniform(const StreamKey& key);

// N(mu, sigma^2) via Box-Muller on the two uniforms of the key's block.
// sigma == 0 returns mu exactly.
double normal(const StreamKey& key, double mu, double sigma);

}  // namespace levelcross::rng
