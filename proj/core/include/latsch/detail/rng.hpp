#pragma once

#include <cstdint>
#include <vector>

namespace latsch::detail {

// splitmix64; all randomness in the library flows through this so that
// results are identical across platforms and standard library versions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  std::uint64_t s = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

// Deterministic value in [-1, 1] attached to a lattice site (cell j, index n).
inline double site_profile(std::uint64_t seed, int cell, const std::vector<int>& n) {
  std::uint64_t h = hash_combine(seed, static_cast<std::uint64_t>(cell) + 0x51ULL);
  for (int c : n) h = hash_combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(c)) ^ 0xabcd1234ULL);
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace latsch::detail
