#pragma once

#include <cstdint>
#include <random>

namespace ovl {

// splitmix64 mixing step; used to derive statistically independent
// per-replicate seeds from (master seed, replicate index) so replicates can
// run in any order — including concurrently — with identical results.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. mt19937_64's
// output sequence is fixed by the C++ standard, so this mapping is
// bit-reproducible across platforms (std::uniform_real_distribution is not).
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace ovl
