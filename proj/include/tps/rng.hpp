#pragma once
// Deterministic seed derivation so results do not depend on thread count or
// scheduling order: every (seed, stream...) combination maps to its own
// generator seed via splitmix64 steps.

#include <cstdint>
#include <random>

namespace tps {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ splitmix64(b ^ 0x5851f42d4c957f2dULL));
}

// Bounded draw; bias is negligible for the small ranges used here and the
// result is identical across platforms (std::uniform_int_distribution is not).
inline uint64_t draw(std::mt19937_64& g, uint64_t n) { return n ? g() % n : 0; }

inline int draw_int(std::mt19937_64& g, int lo, int hi) {  // inclusive range
  return lo + static_cast<int>(draw(g, static_cast<uint64_t>(hi - lo + 1)));
}

inline double draw_real(std::mt19937_64& g) {
  return (g() >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace tps
